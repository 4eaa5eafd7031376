use std::fmt::Write;

use crate::error::{domain, Error, Result};
use crate::model::AtomNetwork;
use crate::series::fmt_sig;

/// Collinear chain along x starting at the origin, with `spacings[k]`
/// between atoms `k` and `k + 1`.
pub fn build_chain(spacings: &[f64], detunings: Vec<f64>, c6: f64) -> Result<AtomNetwork> {
    if detunings.len() != spacings.len() + 1 {
        return Err(Error::Shape {
            expected: spacings.len() + 1,
            got: detunings.len(),
        });
    }
    if let Some(s) = spacings.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(domain(format!("chain spacing must be positive, got {s}")));
    }
    let mut x = 0.0;
    let mut positions = Vec::with_capacity(detunings.len());
    positions.push([0.0, 0.0, 0.0]);
    for s in spacings {
        x += s;
        positions.push([x, 0.0, 0.0]);
    }
    AtomNetwork::new(positions, detunings, c6)
}

/// `index,x,y,z,detuning` table of a network.
pub fn positions_csv(network: &AtomNetwork) -> String {
    let mut out = String::from("index,x,y,z,detuning\n");
    for (i, (p, d)) in network
        .positions()
        .iter()
        .zip(network.static_detunings())
        .enumerate()
    {
        let _ = writeln!(
            out,
            "{i},{},{},{},{}",
            fmt_sig(p[0]),
            fmt_sig(p[1]),
            fmt_sig(p[2]),
            fmt_sig(*d)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_are_reproduced() {
        let gaps = [1.0, 0.891, 1.0, 1.0, 1.0];
        let net = build_chain(&gaps, vec![-10.0; 6], 10.0).unwrap();
        for (k, g) in gaps.iter().enumerate() {
            assert!((net.distance(k, k + 1) - g).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_spacing() {
        assert!(build_chain(&[1.0, 0.0], vec![0.0; 3], 10.0).is_err());
        assert!(build_chain(&[1.0, -1.0], vec![0.0; 3], 10.0).is_err());
        assert!(build_chain(&[1.0], vec![0.0; 3], 10.0).is_err());
    }

    #[test]
    fn csv_has_one_row_per_atom() {
        let net = build_chain(&[1.0], vec![-10.0, -10.0], 10.0).unwrap();
        let csv = positions_csv(&net);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("1,1.00000000e0,"));
    }
}
