use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ConnectionSource, FieldSource, Scenario};
use crate::error::{Error, Result};
use crate::magnetic::{ConnectionData, Turn};

/// Reseeds tried when a τ-breaking intermediate connection comes out
/// τ-invariant by chance.
pub const MAX_RESEEDS: u64 = 64;

/// `G`-invariant data, given on the base graph and on `G\M`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantData {
    pub base: ConnectionData,
    /// Extra phase `δ` on the edges of `G\M`, absent when `G = Ĝ`.
    pub intermediate: Option<ConnectionData>,
    /// `Q` on the vertices of `G\M`.
    pub potential: Vec<f64>,
    /// `R` on the vertices of `G\M`.
    pub curvature: Vec<f64>,
    /// Seed the connection was drawn from, after any reseeding.
    pub seed: u64,
}

/// Edge of `G\M` that `τ` carries the lift `(e, Gx)` to, namely `(e, Gτx)`.
pub fn mid_edge_tau_image(scn: &Scenario, tau: usize, e: usize) -> usize {
    let q = &scn.mid_quotient;
    let (be, c) = q.edge_label(e);
    let x = q.coset_table.coset_reps()[c];
    q.edge(be, q.coset_table.coset_of(scn.top.mul(tau, x)))
}

fn tau_invariant(scn: &Scenario, tau: usize, delta: &ConnectionData) -> Result<bool> {
    for e in 0..scn.mid_quotient.graph.edge_count() {
        let f = mid_edge_tau_image(scn, tau, e);
        if !delta.phase(e)?.congruent(delta.phase(f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_turns(rng: &mut ChaCha8Rng, n: usize, max_den: i64) -> Result<ConnectionData> {
    let turns = (0..n)
        .map(|_| {
            let den = rng.gen_range(1..=max_den);
            Turn::new(rng.gen_range(0..den), den)
        })
        .collect::<Result<_>>()?;
    Ok(ConnectionData::from_turns(turns))
}

fn field(source: &FieldSource, n: usize, seed: u64, stream: u64) -> Vec<f64> {
    match source {
        FieldSource::Constant(c) => vec![*c; n],
        FieldSource::Values(v) => v.clone(),
        FieldSource::Random { scale } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            (0..n).map(|_| scale * rng.gen::<f64>()).collect()
        }
    }
}

/// Draws the scenario's connection and vertex fields. Phases are uniform
/// rationals `p/q` with `1 ≤ q ≤ max_denominator`, `0 ≤ p < q`; `Q` and `R`
/// come from separate ChaCha streams of the same seed.
pub fn generate_invariant_data(scn: &Scenario, seed: u64) -> Result<InvariantData> {
    let base_edges = scn.voltage_graph.base.graph.edge_count();
    let mid_edges = scn.mid_quotient.graph.edge_count();
    let mid_vertices = scn.mid_quotient.graph.vertex_count;
    let (base, intermediate, used) = match &scn.connection {
        ConnectionSource::Zero => (ConnectionData::zero(base_edges), None, seed),
        ConnectionSource::Files { base, intermediate } => {
            for e in 0..base_edges {
                base.phase(e)?;
            }
            if let Some(mid) = intermediate {
                for e in 0..mid_edges {
                    mid.phase(e)?;
                }
            }
            (base.clone(), intermediate.clone(), seed)
        }
        ConnectionSource::Random {
            max_denominator,
            break_tau,
        } => {
            let mut found = None;
            for attempt in 0..MAX_RESEEDS {
                let s = seed.wrapping_add(attempt);
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let base = random_turns(&mut rng, base_edges, *max_denominator)?;
                let mid = if scn.sheets() > 1 {
                    Some(random_turns(&mut rng, mid_edges, *max_denominator)?)
                } else {
                    None
                };
                if *break_tau {
                    let tau = scn.tau.expect("validated");
                    if tau_invariant(scn, tau, mid.as_ref().expect("validated"))? {
                        continue;
                    }
                }
                found = Some((base, mid, s));
                break;
            }
            found.ok_or_else(|| {
                Error::validation(
                    "connection.break_tau",
                    format!("every draw in {MAX_RESEEDS} seeds was tau-invariant"),
                )
            })?
        }
    };
    Ok(InvariantData {
        base,
        intermediate,
        potential: field(&scn.potential, mid_vertices, seed, 1),
        curvature: field(&scn.curvature, mid_vertices, seed, 2),
        seed: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::bundled;

    fn fano_brooks() -> Scenario {
        let dir = tempfile::tempdir().unwrap();
        let path = bundled::write_brooks(dir.path()).unwrap();
        Scenario::load(path).unwrap()
    }

    #[test]
    fn deterministic_for_a_seed() {
        let scn = fano_brooks();
        let a = generate_invariant_data(&scn, 11).unwrap();
        let b = generate_invariant_data(&scn, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_invariant_data(&scn, 12).unwrap());
    }

    #[test]
    fn phases_respect_denominator_bound() {
        let scn = fano_brooks();
        let d = generate_invariant_data(&scn, 3).unwrap();
        let all = d
            .base
            .phases
            .values()
            .chain(d.intermediate.as_ref().unwrap().phases.values());
        for t in all {
            assert!(*t.denom() <= 360.into());
            assert!(*t.numer() >= 0.into() && t.numer() < t.denom());
        }
    }

    #[test]
    fn break_tau_differs_across_sheets() {
        let scn = fano_brooks();
        let tau = scn.tau.unwrap();
        for seed in 0..5 {
            let d = generate_invariant_data(&scn, seed).unwrap();
            assert!(!tau_invariant(&scn, tau, d.intermediate.as_ref().unwrap()).unwrap());
        }
    }

    #[test]
    fn zero_mode() {
        let mut scn = fano_brooks();
        scn.connection = ConnectionSource::Zero;
        scn.potential = FieldSource::Constant(0.0);
        let d = generate_invariant_data(&scn, 5).unwrap();
        assert!(d.base.phases.values().all(Turn::is_zero));
        assert!(d.intermediate.is_none());
        assert!(d.potential.iter().all(|&q| q == 0.0));
    }
}
