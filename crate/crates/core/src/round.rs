//! Directed-rounding scalar kernels: `fldown(a ∘ b)` and `flup(a ∘ b)` for
//! the four basic operations, without touching the floating-point
//! environment.
//!
//! The default build computes in round-to-nearest and uses error-free
//! transformations (TwoSum for ±, FMA residuals for × and ÷) to decide the
//! exact rounding direction, nudging the result one step outward only when
//! the nearest result is provably on the wrong side. The outputs are exactly
//! the IEEE 754 directed-rounding results, so degenerate operations stay
//! exact and no thread-global FP state is involved.
//!
//! With the `hw-round` feature the kernels instead switch the hardware
//! rounding mode around each operation (x86_64 only). Both implementations
//! must agree bit for bit; a feature-gated test asserts this.

/// Below this magnitude the FMA residual of a product or quotient may itself
/// be inexact, so the kernels fall back to an unconditional one-step
/// widening, which is always a valid enclosure of the true result.
const EFT_TINY: f64 = f64::from_bits(0x07B0_0000_0000_0000); // 2^-900

#[cfg(not(feature = "hw-round"))]
mod imp {
    use super::EFT_TINY;

    /// Exact error of the rounded sum `s = fl(a + b)` for finite `s`.
    fn sum_err(a: f64, b: f64, s: f64) -> f64 {
        let (big, small) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
        small - (s - big)
    }

    pub fn add_down(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return s;
        }
        if sum_err(a, b, s) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    pub fn add_up(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return s;
        }
        if sum_err(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    pub fn sub_down(a: f64, b: f64) -> f64 {
        add_down(a, -b)
    }

    pub fn sub_up(a: f64, b: f64) -> f64 {
        add_up(a, -b)
    }

    pub fn mul_down(a: f64, b: f64) -> f64 {
        let p = a * b;
        if !p.is_finite() {
            return p;
        }
        if p == 0.0 {
            if a == 0.0 || b == 0.0 {
                return p;
            }
            // Complete underflow: sign of the true product is known.
            return if (a > 0.0) == (b > 0.0) {
                0.0
            } else {
                -f64::from_bits(1)
            };
        }
        if p.abs() < EFT_TINY {
            return p.next_down();
        }
        let e = a.mul_add(b, -p);
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    }

    pub fn mul_up(a: f64, b: f64) -> f64 {
        let p = a * b;
        if !p.is_finite() {
            return p;
        }
        if p == 0.0 {
            if a == 0.0 || b == 0.0 {
                return p;
            }
            return if (a > 0.0) == (b > 0.0) {
                f64::from_bits(1)
            } else {
                -0.0
            };
        }
        if p.abs() < EFT_TINY {
            return p.next_up();
        }
        let e = a.mul_add(b, -p);
        if e > 0.0 {
            p.next_up()
        } else {
            p
        }
    }

    pub fn div_down(a: f64, b: f64) -> f64 {
        let q = a / b;
        if !q.is_finite() || a == 0.0 {
            return q;
        }
        if q.abs() < EFT_TINY || a.abs() < EFT_TINY {
            return q.next_down();
        }
        // true quotient t satisfies t - q = -(q*b - a)/b
        let r = q.mul_add(b, -a);
        if r != 0.0 && (r > 0.0) == (b > 0.0) {
            q.next_down()
        } else {
            q
        }
    }

    pub fn div_up(a: f64, b: f64) -> f64 {
        let q = a / b;
        if !q.is_finite() || a == 0.0 {
            return q;
        }
        if q.abs() < EFT_TINY || a.abs() < EFT_TINY {
            return q.next_up();
        }
        let r = q.mul_add(b, -a);
        if r != 0.0 && (r > 0.0) != (b > 0.0) {
            q.next_up()
        } else {
            q
        }
    }
}

#[cfg(feature = "hw-round")]
mod imp {
    #[cfg(not(target_arch = "x86_64"))]
    compile_error!("hw-round is only supported on x86_64");

    use std::ptr;

    // x86_64 SysV FP-environment rounding modes
    const FE_TONEAREST: libc::c_int = 0;
    const FE_DOWNWARD: libc::c_int = 0x400;
    const FE_UPWARD: libc::c_int = 0x800;

    extern "C" {
        fn fesetround(mode: libc::c_int) -> libc::c_int;
    }

    /// Runs `op` under the given rounding mode, restoring round-to-nearest
    /// afterwards. Volatile reads and writes keep the compiler from folding
    /// the arithmetic across the mode switches.
    fn with_mode(mode: libc::c_int, a: f64, b: f64, op: impl Fn(f64, f64) -> f64) -> f64 {
        unsafe {
            fesetround(mode);
            let x = ptr::read_volatile(&a);
            let y = ptr::read_volatile(&b);
            let mut out = 0.0f64;
            ptr::write_volatile(&mut out, op(x, y));
            fesetround(FE_TONEAREST);
            ptr::read_volatile(&out)
        }
    }

    pub fn add_down(a: f64, b: f64) -> f64 {
        with_mode(FE_DOWNWARD, a, b, |x, y| x + y)
    }
    pub fn add_up(a: f64, b: f64) -> f64 {
        with_mode(FE_UPWARD, a, b, |x, y| x + y)
    }
    pub fn sub_down(a: f64, b: f64) -> f64 {
        with_mode(FE_DOWNWARD, a, b, |x, y| x - y)
    }
    pub fn sub_up(a: f64, b: f64) -> f64 {
        with_mode(FE_UPWARD, a, b, |x, y| x - y)
    }
    pub fn mul_down(a: f64, b: f64) -> f64 {
        with_mode(FE_DOWNWARD, a, b, |x, y| x * y)
    }
    pub fn mul_up(a: f64, b: f64) -> f64 {
        with_mode(FE_UPWARD, a, b, |x, y| x * y)
    }
    pub fn div_down(a: f64, b: f64) -> f64 {
        with_mode(FE_DOWNWARD, a, b, |x, y| x / y)
    }
    pub fn div_up(a: f64, b: f64) -> f64 {
        with_mode(FE_UPWARD, a, b, |x, y| x / y)
    }
}

pub(crate) use imp::{add_down, add_up, div_down, div_up, mul_down, mul_up, sub_down, sub_up};
