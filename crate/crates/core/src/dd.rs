//! Double-double helpers built on `twofloat`.

use nalgebra::DMatrix;
use twofloat::TwoFloat;

pub type Dd = TwoFloat;

pub fn dd(x: f64) -> Dd {
    TwoFloat::from(x)
}

pub fn to_f64(x: Dd) -> f64 {
    x.hi() + x.lo()
}

pub fn dot(a: &[Dd], b: &[Dd]) -> Dd {
    let mut s = dd(0.0);
    for (x, y) in a.iter().zip(b) {
        s += *x * *y;
    }
    s
}

/// y = M x for a symmetric M whose f64 entries are taken as exact.
pub fn sym_matvec(m: &DMatrix<f64>, x: &[Dd]) -> Vec<Dd> {
    (0..x.len())
        .map(|i| {
            let mut s = dd(0.0);
            for (mji, xj) in m.column(i).iter().zip(x) {
                s += *xj * *mji;
            }
            s
        })
        .collect()
}

/// e^x to double-double accuracy. Reduction by ln 2 and 2¹⁰, Taylor series
/// for e^r − 1, then repeated squaring of 1 + s.
pub fn exp(x: Dd) -> Dd {
    if x.hi() < -745.0 {
        return dd(0.0);
    }
    if x.hi() > 709.0 {
        return dd(f64::INFINITY);
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let r = (x - twofloat::consts::LN_2 * k) / 1024.0;
    let mut term = r;
    let mut s = r;
    for n in 2..=12 {
        term = term * r / n as f64;
        s += term;
    }
    for _ in 0..10 {
        s = s * 2.0 + s * s;
    }
    // 2^k split in two so neither factor leaves the normal range
    let k = k as i32;
    (s + 1.0) * 2f64.powi(k / 2) * 2f64.powi(k - k / 2)
}

pub fn sqrt2() -> Dd {
    dd(2.0).sqrt()
}
