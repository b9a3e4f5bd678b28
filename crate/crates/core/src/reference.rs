//! Reference volume table used as ground truth by the `table` verification
//! suite: every `V_{g,n}` for g=0 n<=7, g=1 n<=5, g=2 n<=3, g=3 n<=2,
//! g=4,5 n<=1, and the closed volumes `V_{2,0}` through `V_{5,0}`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::poly::{SymmetricTerm, VolumePolynomial};

const TABLE: &str = include_str!("../data/volume_table.txt");

static PARSED: OnceLock<BTreeMap<(u32, usize), Vec<SymmetricTerm>>> = OnceLock::new();

fn parse(text: &str) -> Result<BTreeMap<(u32, usize), Vec<SymmetricTerm>>> {
    let mut rows: BTreeMap<(u32, usize), Vec<SymmetricTerm>> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("volume table line {}: {what}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [g, n, coeff, p_exp, partition] = fields[..] else {
            return Err(bad("expected 5 fields"));
        };
        let g: u32 = g.parse().map_err(|_| bad("genus"))?;
        let n: usize = n.parse().map_err(|_| bad("boundary count"))?;
        let p_exp: u32 = p_exp.parse().map_err(|_| bad("p exponent"))?;
        let partition = if partition == "-" {
            Vec::new()
        } else {
            partition
                .split(',')
                .map(|s| s.parse::<u32>().map_err(|_| bad("partition")))
                .collect::<Result<Vec<_>>>()?
        };
        rows.entry((g, n)).or_default().push(SymmetricTerm {
            partition,
            p_exp,
            coeff: parse_rational(coeff)?,
        });
    }
    Ok(rows)
}

fn rows() -> &'static BTreeMap<(u32, usize), Vec<SymmetricTerm>> {
    PARSED.get_or_init(|| parse(TABLE).expect("embedded volume table is well formed"))
}

/// `(g, n)` pairs present in the table, sorted.
pub fn reference_keys() -> Vec<(u32, usize)> {
    rows().keys().copied().collect()
}

/// Rows in the monomial symmetric basis, as printed.
pub fn reference_terms(g: u32, n: usize) -> Option<&'static [SymmetricTerm]> {
    rows().get(&(g, n)).map(Vec::as_slice)
}

/// The tabulated `V_{g,n}` expanded into `n` variables.
pub fn reference_volume(g: u32, n: usize) -> Option<VolumePolynomial> {
    let terms = reference_terms(g, n)?;
    Some(VolumePolynomial::from_monomial_symmetric(g, n, terms).expect("table rows fit their n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let keys = reference_keys();
        assert_eq!(keys.len(), 21);
        assert!(keys.contains(&(5, 1)) && keys.contains(&(2, 0)) && keys.contains(&(0, 7)));
        for (g, n) in keys {
            let v = reference_volume(g, n).unwrap();
            v.check_volume_invariants().unwrap();
        }
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse("0 4 1/2 0").is_err());
        assert!(parse("0 4 x 0 1").is_err());
        assert!(parse("# only a comment\n").unwrap().is_empty());
    }
}
