//! Named verification suites, each a batch of exact checks over the
//! volumes of the reference table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::asymptotics::{
    boundary_ratio_rows, check_boundary_trend, check_bracket_ratios, ratio_genus, zograf_conjecture_report,
};
use crate::error::{Error, Result};
use crate::intersection::{
    check_bracket_recursion, check_extracted_numbers, check_generalized_relations, check_second_derivative,
    check_string_dilaton_volume, closed_volume, compositions_up_to, reconstruct_volume,
};
use crate::kdv::{build_table, check_correlator_string_dilaton, check_kdv_all, check_virasoro_all, CorrelatorTable};
use crate::kernel::{eval_d, eval_r, kernel_f, published_kernel, quad_check_f};
use crate::poly::VolumePolynomial;
use crate::recursion::{compute_volume, is_stable, level, VolumeCache};
use crate::reference::{reference_keys, reference_volume};
use crate::report::{Check, Report};
use crate::ribbon::kontsevich_check;
use crate::zograf::check_zograf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Table,
    Kernels,
    StringDilaton,
    SecondDerivative,
    Generalized,
    Bracket,
    Kontsevich,
    Zograf,
    Kdv,
    Virasoro,
    Asymptotics,
    Invariants,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 13] = [
        ("all", Suite::All),
        ("table", Suite::Table),
        ("kernels", Suite::Kernels),
        ("string-dilaton", Suite::StringDilaton),
        ("second-derivative", Suite::SecondDerivative),
        ("generalized", Suite::Generalized),
        ("bracket", Suite::Bracket),
        ("kontsevich", Suite::Kontsevich),
        ("zograf", Suite::Zograf),
        ("kdv", Suite::Kdv),
        ("virasoro", Suite::Virasoro),
        ("asymptotics", Suite::Asymptotics),
        ("invariants", Suite::Invariants),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, s)| *s == self).map(|(n, _)| *n).expect("every suite is named")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES.iter().find(|(n, _)| *n == s).map(|(_, v)| *v).ok_or_else(|| {
            let names: Vec<&str> = Self::NAMES.iter().map(|(n, _)| *n).collect();
            Error::InvalidArgument(format!("unknown suite '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

/// Shared state for a verification run.
pub struct Verifier<'a> {
    pub cache: &'a VolumeCache,
    /// Level of the correlator table used by the KdV, Virasoro and
    /// Kontsevich suites.
    pub table_level: u32,
    table: std::sync::OnceLock<CorrelatorTable>,
}

/// `(g, n)` with `n >= 1` present in the reference table.
pub fn open_reference_keys() -> Vec<(u32, usize)> {
    reference_keys().into_iter().filter(|&(_, n)| n > 0).collect()
}

impl<'a> Verifier<'a> {
    pub fn new(cache: &'a VolumeCache, table_level: u32) -> Self {
        Verifier {
            cache,
            table_level,
            table: std::sync::OnceLock::new(),
        }
    }

    fn table(&self) -> Result<&CorrelatorTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = build_table(self.table_level, self.cache)?;
        Ok(self.table.get_or_init(|| t))
    }

    /// Runs one suite; `All` runs every other suite in turn.
    pub fn run(&self, suite: Suite) -> Result<Report> {
        match suite {
            Suite::All => {
                let mut report = Report::new();
                for &(_, s) in &Suite::NAMES[1..] {
                    report.extend(self.run(s)?);
                }
                Ok(report)
            }
            Suite::Table => self.table_suite(),
            Suite::Kernels => kernels_suite(),
            Suite::StringDilaton => self.string_dilaton_suite(),
            Suite::SecondDerivative => self.second_derivative_suite(),
            Suite::Generalized => self.generalized_suite(),
            Suite::Bracket => self.bracket_suite(),
            Suite::Kontsevich => self.kontsevich_suite(),
            Suite::Zograf => self.zograf_suite(),
            Suite::Kdv => self.kdv_suite(),
            Suite::Virasoro => self.virasoro_suite(),
            Suite::Asymptotics => self.asymptotics_suite(),
            Suite::Invariants => self.invariants_suite(),
        }
    }

    fn volume(&self, g: u32, n: usize) -> Result<VolumePolynomial> {
        if n == 0 {
            closed_volume(g, self.cache)
        } else {
            Ok((*compute_volume(g, n, self.cache)?).clone())
        }
    }

    /// Every reference row, compared coefficient by coefficient.
    pub fn table_suite(&self) -> Result<Report> {
        let mut report = Report::new();
        for (g, n) in reference_keys() {
            let expected = reference_volume(g, n).expect("listed key");
            let computed = self.volume(g, n)?;
            report.push(Check::compare(format!("reference row V_({g},{n})"), &computed, &expected));
        }
        Ok(report)
    }

    /// String and dilaton at `2 pi i` for every `(g, n)` whose `V_{g,n+1}` is
    /// a reference row; `n = 0` gives `V_{g,1}(2 pi i) = 0`.
    pub fn string_dilaton_suite(&self) -> Result<Report> {
        let mut report = Report::new();
        for (g, n1) in open_reference_keys() {
            let n = n1 - 1;
            if n == 0 && g == 0 || n > 0 && !is_stable(g, n) {
                continue;
            }
            report.extend(check_string_dilaton_volume(g, n, self.cache)?);
        }
        Ok(report)
    }

    pub fn second_derivative_suite(&self) -> Result<Report> {
        let mut report = Report::new();
        for (g, n1) in open_reference_keys() {
            let n = n1 - 1;
            if n > 0 && is_stable(g, n) {
                report.push(check_second_derivative(g, n, self.cache)?);
            }
        }
        Ok(report)
    }

    /// Generalised string/dilaton for every sorted `alpha` and both degrees
    /// of `m` at which one of the two relations is non-trivial.
    pub fn generalized_suite(&self) -> Result<Report> {
        let mut jobs = Vec::new();
        for (g, n1) in open_reference_keys() {
            let n = n1 - 1;
            if n == 0 || !is_stable(g, n) {
                continue;
            }
            let dim = level(g, n) as u32;
            for alpha in compositions_up_to(dim + 1, n) {
                if alpha.windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                let total: u32 = alpha.iter().sum();
                for m in [dim as i64 - total as i64, dim as i64 + 1 - total as i64] {
                    if m >= 0 {
                        jobs.push((g, alpha.clone(), m as u32));
                    }
                }
            }
        }
        let parts = jobs
            .par_iter()
            .map(|(g, alpha, m)| check_generalized_relations(*g, alpha, *m, self.cache))
            .collect::<Result<Vec<_>>>()?;
        let mut report = Report::new();
        parts.into_iter().for_each(|r| report.extend(r));
        Ok(report)
    }

    /// The bracket recursion for every exponent tuple of every reference row.
    pub fn bracket_suite(&self) -> Result<Report> {
        let mut jobs = Vec::new();
        for (g, n) in open_reference_keys() {
            for alpha in compositions_up_to(level(g, n) as u32, n) {
                jobs.push((g, alpha));
            }
        }
        let checks = jobs
            .par_iter()
            .map(|(g, alpha)| check_bracket_recursion(*g, alpha, self.cache))
            .collect::<Result<Vec<_>>>()?;
        Ok(Report {
            checks,
            notes: Vec::new(),
        })
    }

    pub fn kontsevich_suite(&self) -> Result<Report> {
        let table = self.table()?;
        let mut report = Report::new();
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
            report.extend(kontsevich_check(g, n, table)?);
        }
        Ok(report)
    }

    pub fn zograf_suite(&self) -> Result<Report> {
        let mut report = Report::new();
        for n in 4..=8 {
            report.push(check_zograf(n, self.cache)?);
        }
        Ok(report)
    }

    /// Correlator string/dilaton and KdV for `n = 1..=level`.
    pub fn kdv_suite(&self) -> Result<Report> {
        let table = self.table()?;
        let mut report = check_correlator_string_dilaton(table);
        report.extend(check_kdv_all(self.table_level.max(1), table));
        Ok(report)
    }

    pub fn virasoro_suite(&self) -> Result<Report> {
        check_virasoro_all(&[-1, 0, 1, 2], self.table()?)
    }

    pub fn asymptotics_suite(&self) -> Result<Report> {
        let mut report = check_boundary_trend(2..=5, self.cache)?;
        for (g, n) in open_reference_keys() {
            report.push(check_bracket_ratios(g, n, self.cache)?);
        }
        for row in boundary_ratio_rows(2..=5, 0, self.cache)? {
            report.note(format!(
                "V_({g},1)(0)/(2g V_({g},0)) = {:.6} (4π² = {:.6})",
                row.ratio.value,
                row.reference,
                g = row.g
            ));
        }
        for (g, n) in [(2, 0), (3, 0), (2, 1)] {
            report.note(format!("V_({g},{n})(0)/V_({},{})(0) = {:.6}", g - 1, n + 2, ratio_genus(g, n, self.cache)?.value));
        }
        for (g, n) in [(2, 1), (3, 1), (4, 1), (5, 1)] {
            report.note(format!(
                "V_({g},{n})(0) over the conjectured growth = {:.6}",
                zograf_conjecture_report(g, n, self.cache)?
            ));
        }
        Ok(report)
    }

    /// Structural invariants of every volume in the cache plus exact
    /// reconstruction from intersection numbers.
    pub fn invariants_suite(&self) -> Result<Report> {
        for (g, n) in reference_keys() {
            self.volume(g, n)?;
        }
        let mut report = Report::new();
        let mut keys = self.cache.keys();
        keys.sort_unstable();
        for (g, n) in keys {
            let v = self.cache.get(g, n).expect("listed key");
            let id = format!("invariants of V_({g},{n})");
            report.push(match v.check_volume_invariants() {
                Ok(()) => Check::pass(id),
                Err(e) => Check::fail(id, e.to_string()),
            });
            if n == 0 {
                continue;
            }
            report.push(check_extracted_numbers(g, n, self.cache)?);
            let rebuilt = reconstruct_volume(g, n, self.cache)?;
            report.push(Check::compare(format!("reconstruction of V_({g},{n})"), &rebuilt, &v));
        }
        Ok(report)
    }
}

/// Published kernels, quadrature of `F_{2k-1}` and the `D`, `R` identities.
pub fn kernels_suite() -> Result<Report> {
    let mut report = Report::new();
    for k in 1..=4 {
        let id = format!("F_{} coefficients", 2 * k - 1);
        let expected = published_kernel(k).expect("k <= 4");
        let f = kernel_f(k);
        report.push(if f.coeffs() == &expected[..] {
            Check::pass(id)
        } else {
            Check::fail(id, format!("{:?}", f.coeffs()))
        });
    }
    for k in 1..=4 {
        for t in [0.0, 1.0, 2.0] {
            let id = format!("quadrature F_{}({t})", 2 * k - 1);
            report.push(match quad_check_f(k, t, 1e-6) {
                Ok(r) if r.passed() => Check::pass(id),
                Ok(r) => Check::fail(id, format!("relative error {:e}", r.relative_error)),
                Err(e) => Check::fail(id, e.to_string()),
            });
        }
    }
    let grid = [0.0, 0.5, 1.0, 2.0, 5.0];
    let mut worst_d: f64 = 0.0;
    let mut worst_r: f64 = 0.0;
    for &a in &grid {
        for &b in &grid {
            worst_d = worst_d.max(eval_d(0.0, a, b).abs());
            worst_r = worst_r.max((eval_r(a, b, 0.0) - a).abs());
        }
    }
    for (id, worst) in [("D(0,y,z) = 0", worst_d), ("R(x,y,0) = x", worst_r)] {
        report.push(if worst <= 1e-12 {
            Check::pass(id)
        } else {
            Check::fail(id, format!("deviation {worst:e}"))
        });
    }
    Ok(report)
}
