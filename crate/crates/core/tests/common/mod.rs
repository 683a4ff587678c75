//! Shared oracles for the integration and acceptance suites. Everything in
//! here is deliberately independent of the library's own evaluation paths:
//! exact rationals for arithmetic and derivatives, double-double floats for
//! the angle functions, and a rational Newton polisher for root
//! corroboration.

#![allow(dead_code)]

use certikraw_core::gluing::GluingSystem;
use certikraw_core::interval::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

// ---------------------------------------------------------------- rng

/// SplitMix64: deterministic, dependency-free fuzz driver.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Log-uniform magnitude with random sign, spanning `10^lo..10^hi`.
    pub fn signed_logspace(&mut self, lo: f64, hi: f64) -> f64 {
        let mag = 10f64.powf(self.range(lo, hi));
        if self.next_u64() & 1 == 0 {
            mag
        } else {
            -mag
        }
    }
}

// ---------------------------------------------------------------- rationals

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// 10^-k as a rational.
pub fn rat_pow10_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

pub fn rat_in_interval(x: &BigRational, iv: &Interval) -> bool {
    &rat(iv.lo()) <= x && x <= &rat(iv.hi())
}

/// π to 50 digits, exact.
pub fn rat_pi_50() -> BigRational {
    let digits = "314159265358979323846264338327950288419716939937510";
    BigRational::new(
        digits.parse::<BigInt>().unwrap(),
        BigInt::from(10u32).pow(50),
    )
}

// ------------------------------------------------------- rational complex

#[derive(Clone, Debug, PartialEq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> CRat {
        CRat { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> CRat {
        CRat::new(rat(re), rat(im))
    }

    pub fn zero() -> CRat {
        CRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> CRat {
        CRat::new(BigRational::one(), BigRational::zero())
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn div(&self, o: &CRat) -> CRat {
        let den = &o.re * &o.re + &o.im * &o.im;
        assert!(!den.is_zero(), "rational division by zero");
        CRat::new(
            (&self.re * &o.re + &self.im * &o.im) / &den,
            (&self.im * &o.re - &self.re * &o.im) / &den,
        )
    }

    pub fn neg(&self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }

    pub fn pow(&self, e: u32) -> CRat {
        let mut acc = CRat::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// |z|^2, exact.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Truncate both parts to the 2^-512 grid, bounding coefficient blowup
    /// across Newton iterations.
    pub fn round_bits(&self, bits: u32) -> CRat {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        let r = (&self.re * &scale).floor() / &scale;
        let i = (&self.im * &scale).floor() / &scale;
        CRat::new(r, i)
    }
}

// -------------------------------------------------- rational gluing oracle

/// Exact residual of the selected rows at a rational point, computed from
/// the combined-row tables only (independently of `ResidualSystem`).
pub fn rational_residual(sys: &GluingSystem, selection: &[usize], z: &[CRat]) -> Vec<CRat> {
    selection
        .iter()
        .map(|&idx| {
            let row = &sys.rows[idx];
            let mut plus = CRat::one();
            let mut minus = CRat::one();
            for (j, zj) in z.iter().enumerate() {
                let omz = CRat::one().sub(zj);
                let (ap, an) = split(row.alpha[j]);
                let (bp, bn) = split(row.beta[j]);
                plus = plus.mul(&zj.pow(ap)).mul(&omz.pow(bp));
                minus = minus.mul(&zj.pow(an)).mul(&omz.pow(bn));
            }
            if row.gamma < 0 {
                minus = minus.neg();
            }
            plus.sub(&minus)
        })
        .collect()
}

fn split(v: i64) -> (u32, u32) {
    (v.max(0) as u32, (-v).max(0) as u32)
}

/// Exact complex Jacobian d g_k / d z_j of the selected rows.
pub fn rational_jacobian(sys: &GluingSystem, selection: &[usize], z: &[CRat]) -> Vec<Vec<CRat>> {
    let n = z.len();
    selection
        .iter()
        .map(|&idx| {
            let row = &sys.rows[idx];
            let mut plus = CRat::one();
            let mut minus = CRat::one();
            for (j, zj) in z.iter().enumerate() {
                let omz = CRat::one().sub(zj);
                let (ap, an) = split(row.alpha[j]);
                let (bp, bn) = split(row.beta[j]);
                plus = plus.mul(&zj.pow(ap)).mul(&omz.pow(bp));
                minus = minus.mul(&zj.pow(an)).mul(&omz.pow(bn));
            }
            (0..n)
                .map(|j| {
                    let zj = &z[j];
                    let omz = CRat::one().sub(zj);
                    let (ap, an) = split(row.alpha[j]);
                    let (bp, bn) = split(row.beta[j]);
                    // d/dz [z^a (1-z)^b · rest] = [a/z - b/(1-z)] · whole
                    let logd = |a: u32, b: u32| -> CRat {
                        let mut t = CRat::zero();
                        if a > 0 {
                            t = t.add(&CRat::new(rat_int(a as i64), BigRational::zero()).div(zj));
                        }
                        if b > 0 {
                            t = t.sub(&CRat::new(rat_int(b as i64), BigRational::zero()).div(&omz));
                        }
                        t
                    };
                    let mut dq = minus.mul(&logd(an, bn));
                    if row.gamma < 0 {
                        dq = dq.neg();
                    }
                    plus.mul(&logd(ap, bp)).sub(&dq)
                })
                .collect()
        })
        .collect()
}

/// Exact Gaussian elimination solve of `J d = f` over rational complexes.
#[allow(clippy::needless_range_loop)]
pub fn rational_solve(jac: &[Vec<CRat>], f: &[CRat]) -> Vec<CRat> {
    let n = f.len();
    let mut a: Vec<Vec<CRat>> = jac.to_vec();
    let mut b: Vec<CRat> = f.to_vec();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i][k].norm_sq().cmp(&a[j][k].norm_sq()))
            .unwrap();
        a.swap(k, pivot);
        b.swap(k, pivot);
        assert!(!a[k][k].norm_sq().is_zero(), "singular rational system");
        for i in (k + 1)..n {
            let m = a[i][k].div(&a[k][k]);
            for j in k..n {
                a[i][j] = a[i][j].sub(&m.mul(&a[k][j]));
            }
            b[i] = b[i].sub(&m.mul(&b[k]));
        }
    }
    let mut x = vec![CRat::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in (i + 1)..n {
            s = s.sub(&a[i][j].mul(&x[j]));
        }
        x[i] = s.div(&a[i][i]);
    }
    x
}

/// Newton iteration in exact rational arithmetic from a floating seed,
/// truncating to the 2^-512 grid between steps. Returns the polished point.
pub fn rational_newton_polish(
    sys: &GluingSystem,
    selection: &[usize],
    seed: &[(f64, f64)],
    iters: usize,
) -> Vec<CRat> {
    let mut z: Vec<CRat> = seed.iter().map(|&(re, im)| CRat::from_f64(re, im)).collect();
    for _ in 0..iters {
        let f = rational_residual(sys, selection, &z);
        let j = rational_jacobian(sys, selection, &z);
        let d = rational_solve(&j, &f);
        for (zi, di) in z.iter_mut().zip(&d) {
            *zi = zi.sub(di).round_bits(512);
        }
    }
    z
}

/// `max_k max(|re f_k|, |im f_k|)` as a rational.
pub fn rational_residual_inf(sys: &GluingSystem, selection: &[usize], z: &[CRat]) -> BigRational {
    rational_residual(sys, selection, z)
        .iter()
        .flat_map(|c| [c.re.abs(), c.im.abs()])
        .max()
        .unwrap()
}

// ------------------------------------------------------- double-double

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2: roughly 32 significant
/// digits. Only the operations the atan2 oracle needs.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    /// π with a double-double tail.
    pub fn pi() -> Dd {
        Dd {
            hi: std::f64::consts::PI,
            lo: 1.224_646_799_147_353_2e-16,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::new(s, e + self.lo + o.lo)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::new(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q0 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q0)));
        let q1 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from(q1)));
        let q2 = r2.hi / o.hi;
        Dd::new(q0, q1).add(Dd::from(q2))
    }

    pub fn sqrt(self) -> Dd {
        let s0 = self.hi.sqrt();
        // one dd Newton step: s = (s + x/s) / 2
        let s = Dd::from(s0).add(self.div(Dd::from(s0)));
        Dd {
            hi: s.hi * 0.5,
            lo: s.lo * 0.5,
        }
    }

    pub fn scale2(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// arctan of a dd value to ~30 digits via three angle halvings and a
/// Maclaurin tail.
pub fn dd_atan_dd(t: Dd) -> Dd {
    if t.hi < 0.0 || (t.hi == 0.0 && t.lo < 0.0) {
        return dd_atan_dd(t.neg()).neg();
    }
    if t.hi > 1.0 {
        return Dd::pi()
            .scale2(-1)
            .sub(dd_atan_unit(Dd::from(1.0).div(t)));
    }
    dd_atan_unit(t)
}

pub fn dd_atan(x: f64) -> Dd {
    dd_atan_dd(Dd::from(x))
}

fn dd_atan_unit(mut t: Dd) -> Dd {
    // t in [0, 1]; halve the angle three times: t <- t / (1 + sqrt(1 + t^2))
    for _ in 0..3 {
        let s = Dd::from(1.0).add(t.mul(t)).sqrt();
        t = t.div(Dd::from(1.0).add(s));
    }
    // |t| <= tan(pi/32) < 0.0986: 22 terms push the tail below 1e-46
    let t2 = t.mul(t);
    let mut acc = Dd::from(0.0);
    for k in (0..22).rev() {
        let c = Dd::from(1.0).div(Dd::from((2 * k + 1) as f64));
        let signed = if k % 2 == 1 { c.neg() } else { c };
        acc = acc.mul(t2).add(signed);
    }
    t.mul(acc).scale2(3)
}

/// atan2 with range (-π, π] to ~30 digits. `(0, 0)` is the caller's problem.
pub fn dd_atan2(y: f64, x: f64) -> Dd {
    if x > 0.0 {
        dd_atan_dd(Dd::from(y).div(Dd::from(x)))
    } else if x < 0.0 {
        let base = dd_atan_dd(Dd::from(y).div(Dd::from(x)));
        if y >= 0.0 {
            Dd::pi().add(base)
        } else {
            Dd::pi().neg().add(base)
        }
    } else if y > 0.0 {
        Dd::pi().scale2(-1)
    } else {
        Dd::pi().scale2(-1).neg()
    }
}

/// Interval membership of a dd value with headroom `slack` on each side.
pub fn dd_in_interval(v: Dd, iv: &Interval, slack: f64) -> bool {
    let lo = Dd::from(iv.lo());
    let hi = Dd::from(iv.hi());
    v.sub(lo).to_f64() >= -slack && hi.sub(v).to_f64() >= -slack
}

// ------------------------------------------------------- expression trees

#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    Const(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Random expression of at most `depth` levels in `nvars` variables.
    pub fn random(rng: &mut Rng, depth: usize, nvars: usize) -> Expr {
        if depth == 0 || rng.below(4) == 0 {
            return if rng.below(3) == 0 {
                Expr::Const(rng.below(9) as i64 - 4)
            } else {
                Expr::Var(rng.below(nvars))
            };
        }
        let a = Box::new(Expr::random(rng, depth - 1, nvars));
        let b = Box::new(Expr::random(rng, depth - 1, nvars));
        match rng.below(8) {
            0..=2 => Expr::Add(a, b),
            3 | 4 => Expr::Sub(a, b),
            5 | 6 => Expr::Mul(a, b),
            _ => Expr::Div(a, b),
        }
    }

    pub fn eval_ad(
        &self,
        vars: &[certikraw_core::autodiff::AdTuple],
    ) -> certikraw_core::Result<certikraw_core::autodiff::AdTuple> {
        use certikraw_core::autodiff::AdTuple;
        let dim = vars[0].dim();
        Ok(match self {
            Expr::Var(i) => vars[*i].clone(),
            Expr::Const(c) => AdTuple::constant(Interval::point(*c as f64)?, dim),
            Expr::Add(a, b) => a.eval_ad(vars)?.add(&b.eval_ad(vars)?)?,
            Expr::Sub(a, b) => a.eval_ad(vars)?.sub(&b.eval_ad(vars)?)?,
            Expr::Mul(a, b) => a.eval_ad(vars)?.mul(&b.eval_ad(vars)?)?,
            Expr::Div(a, b) => a.eval_ad(vars)?.div(&b.eval_ad(vars)?)?,
        })
    }

    /// Exact value and gradient via rational dual numbers; `None` when a
    /// denominator vanishes.
    pub fn eval_rat_dual(&self, x: &[BigRational]) -> Option<RatDual> {
        let n = x.len();
        Some(match self {
            Expr::Var(i) => RatDual::var(*i, x[*i].clone(), n),
            Expr::Const(c) => RatDual::constant(rat_int(*c), n),
            Expr::Add(a, b) => a.eval_rat_dual(x)?.add(&b.eval_rat_dual(x)?),
            Expr::Sub(a, b) => a.eval_rat_dual(x)?.sub(&b.eval_rat_dual(x)?),
            Expr::Mul(a, b) => a.eval_rat_dual(x)?.mul(&b.eval_rat_dual(x)?),
            Expr::Div(a, b) => {
                let d = b.eval_rat_dual(x)?;
                if d.val.is_zero() {
                    return None;
                }
                a.eval_rat_dual(x)?.div(&d)
            }
        })
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c as f64,
            Expr::Add(a, b) => a.eval_f64(x) + b.eval_f64(x),
            Expr::Sub(a, b) => a.eval_f64(x) - b.eval_f64(x),
            Expr::Mul(a, b) => a.eval_f64(x) * b.eval_f64(x),
            Expr::Div(a, b) => a.eval_f64(x) / b.eval_f64(x),
        }
    }

    /// True when every division node's denominator interval excludes zero
    /// over the given boxes (so the AD evaluation is defined on the box).
    pub fn ad_defined(&self, vars: &[certikraw_core::autodiff::AdTuple]) -> bool {
        self.eval_ad(vars).is_ok()
    }
}

/// Dense rational forward-mode dual: exact value and gradient.
#[derive(Clone, Debug)]
pub struct RatDual {
    pub val: BigRational,
    pub grad: Vec<BigRational>,
}

impl RatDual {
    pub fn constant(val: BigRational, n: usize) -> RatDual {
        RatDual {
            val,
            grad: vec![BigRational::zero(); n],
        }
    }

    pub fn var(i: usize, val: BigRational, n: usize) -> RatDual {
        let mut grad = vec![BigRational::zero(); n];
        grad[i] = BigRational::one();
        RatDual { val, grad }
    }

    pub fn add(&self, o: &RatDual) -> RatDual {
        RatDual {
            val: &self.val + &o.val,
            grad: self.grad.iter().zip(&o.grad).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &RatDual) -> RatDual {
        RatDual {
            val: &self.val - &o.val,
            grad: self.grad.iter().zip(&o.grad).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &RatDual) -> RatDual {
        RatDual {
            val: &self.val * &o.val,
            grad: self
                .grad
                .iter()
                .zip(&o.grad)
                .map(|(a, b)| a * &o.val + b * &self.val)
                .collect(),
        }
    }

    pub fn div(&self, o: &RatDual) -> RatDual {
        let v = &self.val / &o.val;
        RatDual {
            grad: self
                .grad
                .iter()
                .zip(&o.grad)
                .map(|(a, b)| (a - b * &v) / &o.val)
                .collect(),
            val: v,
        }
    }
}

// ------------------------------------------------------- misc helpers

/// One unit in the 16th significant decimal digit of `v`.
pub fn unit_16th_digit(v: f64) -> f64 {
    let exp = v.abs().log10().floor() as i32;
    10f64.powi(exp - 15)
}

pub fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn load_system(name: &str) -> GluingSystem {
    let bytes = std::fs::read(data_path(name)).unwrap();
    GluingSystem::parse(&bytes).unwrap()
}

/// to_f64 on a rational (round to nearest is fine for diagnostics).
pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
