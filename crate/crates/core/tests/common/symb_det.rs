//! A known symmetric matrix for the CLR quartic at b = 3/2.

use num_complex::Complex64 as C;
use sosnag_core::poly::Polynomial;

fn lin(c: [C; 4]) -> Polynomial {
    Polynomial::linear(&c, C::new(0.0, 0.0))
}

fn re(v: f64) -> C {
    C::new(v, 0.0)
}

/// Entries are `p*w + q` with `w = (2/7) sqrt(-10)`; returns the matrix and
/// the scale `gamma` with `det M = gamma * F`.
pub fn reference_matrix() -> (Vec<Vec<Polynomial>>, C) {
    let w = C::new(0.0, 2.0 / 7.0 * 10f64.sqrt());
    let z = re(0.0);
    let a = |p: f64, q: f64| w * p + q;
    let m11 = lin([a(-11844.0, 8100.0), z, a(3024.0, 13140.0), z]);
    let m12 = lin([z, z, a(7980.0, 14820.0), z]);
    let m13 = lin([a(19971.0, -17460.0), z, a(4494.0, 9600.0), z]);
    let m14 = lin([z, z, a(-1596.0, -26790.0), a(15561.0, -6840.0)]);
    let m22 = lin([z, a(30324.0, -7220.0), a(20216.0, 21660.0), z]);
    let m23 = lin([z, a(20216.0, 21660.0), a(6384.0, 27740.0), z]);
    let m24 = lin([z, a(-20216.0, -21660.0), re(-39710.0), a(7581.0, -21660.0)]);
    let m33 = lin([a(-13230.0, 31860.0), re(39710.0), a(-28910.0, 29910.0), z]);
    let m34 = lin([z, re(-39710.0), a(25004.0, -17100.0), a(5187.0 / 2.0, -1140.0)]);
    let m44 = lin([z, re(39710.0), a(-20216.0, 37905.0), a(-30324.0, 27075.0)]);
    let m = vec![
        vec![m11, m12.clone(), m13.clone(), m14.clone()],
        vec![m12, m22, m23.clone(), m24.clone()],
        vec![m13, m23, m33, m34.clone()],
        vec![m14, m24, m34, m44],
    ];
    let gamma = (w * 735.0 + 2201.0) * -54874315598400.0;
    (m, gamma)
}
