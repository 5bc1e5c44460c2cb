use std::io;

use serde::Serialize;

use super::{build_contrived_qe_ht, effective_depth, CONTRIVED_NAME};
use crate::circuit::Circuit;
use crate::spectroscopy::{Algorithm, SpectroscopyError, StatePrep};

/// Every builder `depth` accepts, by name.
pub fn builder_names() -> Vec<&'static str> {
    let mut names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
    names.push(CONTRIVED_NAME);
    names
}

/// Builds a circuit by builder name (an algorithm name or `contrived`).
pub fn build_named(name: &str, n: usize, prep: &StatePrep) -> Result<Circuit, SpectroscopyError> {
    if name.eq_ignore_ascii_case(CONTRIVED_NAME) {
        build_contrived_qe_ht(n, prep)
    } else {
        name.parse::<Algorithm>()?.build(n, prep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthRow {
    pub algorithm: String,
    pub n: usize,
    pub k: usize,
    pub width: usize,
    pub depth: u64,
    pub effective_depth: u64,
}

/// Width, depth and effective depth of every builder for each `n`, ordered
/// by builder then `n`.
pub fn depth_table(
    ns: impl IntoIterator<Item = usize>,
    prep: &StatePrep,
) -> Result<Vec<DepthRow>, SpectroscopyError> {
    let ns: Vec<usize> = ns.into_iter().collect();
    let mut rows = Vec::new();
    for name in builder_names() {
        for &n in &ns {
            let c = build_named(name, n, prep)?;
            let r = effective_depth(&c);
            rows.push(DepthRow {
                algorithm: name.to_string(),
                n,
                k: prep.k(),
                width: c.width(),
                depth: r.depth,
                effective_depth: r.effective_depth,
            });
        }
    }
    Ok(rows)
}

pub fn write_depth_csv<W: io::Write>(rows: &[DepthRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
