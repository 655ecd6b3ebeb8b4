use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tol, QubitRegister, SingleQubitBasis};
use crate::error::{Error, Result};

/// How the outcome of a measurement is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeSelection {
    /// Take this outcome; fails if its probability vanishes.
    Forced(u8),
    /// Sample from a fresh generator seeded with this value.
    Seeded(u64),
    /// Sample using a uniform draw in `[0, 1)` supplied by the caller.
    Uniform(f64),
}

#[derive(Debug, Clone)]
pub struct Measurement<S> {
    pub outcome: u8,
    /// Exact Born probability of `outcome`.
    pub probability: f64,
    /// Renormalized post-measurement state; the measured qubit is left in
    /// the corresponding basis vector.
    pub post_state: S,
}

pub fn measure_in_basis<S: QubitRegister + Clone>(
    state: &S,
    qubit: usize,
    basis: &SingleQubitBasis,
    selection: OutcomeSelection,
) -> Result<Measurement<S>> {
    let dev = basis.deviation();
    if dev > tol::EXACT {
        return Err(Error::NotOrthonormal(dev));
    }
    let (branch0, p0) = state.project_qubit(qubit, basis.vector(0))?;
    let (branch1, p1) = state.project_qubit(qubit, basis.vector(1))?;
    // Probabilities relative to the incoming weight, so unnormalized inputs
    // still produce conditional branch probabilities.
    let total = p0 + p1;
    let (q0, q1) = (p0 / total, p1 / total);

    let outcome = match selection {
        OutcomeSelection::Forced(o) if o > 1 => {
            return Err(Error::Policy(format!("outcome {o} is not 0 or 1")))
        }
        OutcomeSelection::Forced(o) => o,
        OutcomeSelection::Seeded(seed) => draw(q0, ChaCha8Rng::seed_from_u64(seed).gen()),
        OutcomeSelection::Uniform(u) => draw(q0, u),
    };
    let (branch, weight, probability) = if outcome == 0 {
        (branch0, p0, q0)
    } else {
        (branch1, p1, q1)
    };
    if probability < tol::FORCED_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome {
            outcome,
            probability,
        });
    }
    Ok(Measurement {
        outcome,
        probability,
        post_state: branch.renormalized(weight),
    })
}

fn draw(p0: f64, u: f64) -> u8 {
    u8::from(u >= p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{StateVector, C64};

    #[test]
    fn computational_zero_is_certain() {
        let zero = StateVector::from_bits("0").unwrap();
        let m = measure_in_basis(
            &zero,
            0,
            &SingleQubitBasis::computational(),
            OutcomeSelection::Seeded(7),
        )
        .unwrap();
        assert_eq!(m.outcome, 0);
        assert!((m.probability - 1.0).abs() < tol::EXACT);
        assert!(matches!(
            measure_in_basis(&zero, 0, &SingleQubitBasis::computational(), OutcomeSelection::Forced(1)),
            Err(Error::ZeroProbabilityOutcome { outcome: 1, .. })
        ));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let plus = StateVector::normalized(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let basis = SingleQubitBasis::computational();
        let a: Vec<u8> = (0..32)
            .map(|s| measure_in_basis(&plus, 0, &basis, OutcomeSelection::Seeded(s)).unwrap().outcome)
            .collect();
        let b: Vec<u8> = (0..32)
            .map(|s| measure_in_basis(&plus, 0, &basis, OutcomeSelection::Seeded(s)).unwrap().outcome)
            .collect();
        assert_eq!(a, b);
        assert!(a.contains(&0) && a.contains(&1));
    }

    #[test]
    fn density_and_pure_measurements_agree() {
        let psi = StateVector::normalized(vec![
            C64::new(0.2, 0.1),
            C64::new(-0.4, 0.3),
            C64::new(0.5, 0.0),
            C64::new(0.1, -0.6),
        ])
        .unwrap();
        let basis = SingleQubitBasis::from_angles(1.1, 0.4);
        for outcome in 0..2 {
            let mp = measure_in_basis(&psi, 1, &basis, OutcomeSelection::Forced(outcome)).unwrap();
            let md = measure_in_basis(&psi.to_density(), 1, &basis, OutcomeSelection::Forced(outcome)).unwrap();
            assert!((mp.probability - md.probability).abs() < tol::EXACT);
            assert!(mp.post_state.to_density().matrix().max_abs_diff(md.post_state.matrix()) < tol::EXACT);
            assert!(md.post_state.is_normalized());
        }
    }
}
