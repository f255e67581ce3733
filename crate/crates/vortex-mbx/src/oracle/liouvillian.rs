//! Dense steady-state solve of the full three-level master equation.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::DecayRates;

type CMat = SMatrix<Complex64, 8, 8>;
type CVec = SVector<Complex64, 8>;

// Unknown ordering with rho11 eliminated by the trace constraint.
const R22: usize = 0;
const R33: usize = 1;
const R21: usize = 2;
const R12: usize = 3;
const R31: usize = 4;
const R13: usize = 5;
const R32: usize = 6;
const R23: usize = 7;
// Column permutation mapping each unknown rho_ij to rho_ji.
const TRANSPOSED: [usize; 8] = [0, 1, 3, 2, 5, 4, 7, 6];

/// Solved 3x3 density matrix, 1-indexed like the level labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: [[Complex64; 3]; 3],
}

impl DensityMatrix {
    /// Element rho_ij for levels i, j in 1..=3.
    pub fn rho(&self, i: usize, j: usize) -> Complex64 {
        assert!(
            (1..=3).contains(&i) && (1..=3).contains(&j),
            "level labels run 1..=3"
        );
        self.m[i - 1][j - 1]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Largest |rho_ij - conj(rho_ji)| over all element pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Real part of the level population.
    pub fn population(&self, level: usize) -> f64 {
        self.rho(level, level).re
    }
}

fn check_finite(name: &'static str, v: Complex64) -> Result<()> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::NonFinite {
            name,
            value: if v.re.is_finite() { v.im } else { v.re },
        });
    }
    Ok(())
}

/// Steady state of the master equation for fixed driving fields: all time
/// derivatives zero, trace fixed to one. The probe detuning sits on both the
/// |2> and |3> rows; the control is on resonance. Populations relax 3 -> 2 at
/// r3 and 2 -> 1 at r2, matching the decay channels behind the coherence
/// rates.
pub fn steady_state_rho(
    rates: &DecayRates,
    omega_c: f64,
    omega_p: Complex64,
    omega_s: Complex64,
    delta_p: f64,
) -> Result<DensityMatrix> {
    rates.validate()?;
    for (name, value) in [("omega_c", omega_c), ("delta_p", delta_p)] {
        if !value.is_finite() {
            return Err(Error::NonFinite { name, value });
        }
    }
    check_finite("omega_p", omega_p)?;
    check_finite("omega_s", omega_s)?;

    let i = Complex64::i();
    let half = 0.5 * i;
    let op = omega_p;
    let os = omega_s;
    let oc = Complex64::from(omega_c);
    let r2 = rates.r2();
    let r3 = rates.r3();

    let mut m = CMat::zeros();
    let mut c = CVec::zeros();

    // d rho22 = i/2 op rho12 - i/2 op* rho21 + i/2 oc rho32 - i/2 oc rho23
    //           - r2 rho22 + r3 rho33
    m[(R22, R12)] += half * op;
    m[(R22, R21)] -= half * op.conj();
    m[(R22, R32)] += half * oc;
    m[(R22, R23)] -= half * oc;
    m[(R22, R22)] -= r2;
    m[(R22, R33)] += r3;

    // d rho33 = i/2 os rho13 - i/2 os* rho31 + i/2 oc rho23 - i/2 oc rho32
    //           - r3 rho33
    m[(R33, R13)] += half * os;
    m[(R33, R31)] -= half * os.conj();
    m[(R33, R23)] += half * oc;
    m[(R33, R32)] -= half * oc;
    m[(R33, R33)] -= r3;

    // d rho21 = -(i dp + g21) rho21 + i/2 op (rho11 - rho22)
    //           + i/2 oc rho31 - i/2 os rho23
    // with rho11 = 1 - rho22 - rho33 folded into the constant and columns
    m[(R21, R21)] -= i * delta_p + rates.gamma21;
    m[(R21, R22)] -= i * op;
    m[(R21, R33)] -= half * op;
    m[(R21, R31)] += half * oc;
    m[(R21, R23)] -= half * os;
    c[R21] += half * op;

    // d rho31 = -(i dp + g31) rho31 + i/2 os (rho11 - rho33)
    //           + i/2 oc rho21 - i/2 op rho32
    m[(R31, R31)] -= i * delta_p + rates.gamma31;
    m[(R31, R22)] -= half * os;
    m[(R31, R33)] -= i * os;
    m[(R31, R21)] += half * oc;
    m[(R31, R32)] -= half * op;
    c[R31] += half * os;

    // d rho32 = -g32 rho32 + i/2 oc (rho22 - rho33) + i/2 os rho12 - i/2 op* rho31
    m[(R32, R32)] -= Complex64::from(rates.gamma32);
    m[(R32, R22)] += half * oc;
    m[(R32, R33)] -= half * oc;
    m[(R32, R12)] += half * os;
    m[(R32, R31)] -= half * op.conj();

    // conjugate rows: d rho_ij = conj(d rho_ji)
    for (tgt, src) in [(R12, R21), (R13, R31), (R23, R32)] {
        for k in 0..8 {
            m[(tgt, TRANSPOSED[k])] = m[(src, k)].conj();
        }
        c[tgt] = c[src].conj();
    }

    // steady state: M v + c = 0
    let v = m.lu().solve(&(-c)).ok_or(Error::SingularSystem)?;
    let r22 = v[R22];
    let r33 = v[R33];
    let r11 = Complex64::from(1.0) - r22 - r33;
    let out = DensityMatrix {
        m: [
            [r11, v[R12], v[R13]],
            [v[R21], r22, v[R23]],
            [v[R31], v[R32], r33],
        ],
    };
    for row in &out.m {
        for x in row {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(Error::NonFiniteResult("steady-state density matrix"));
            }
        }
    }
    Ok(out)
}
