//! End-to-end acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use wpvol::asymptotics::{check_boundary_trend, check_bracket_ratios};
use wpvol::exact::{int, ratio};
use wpvol::intersection::{check_second_derivative, check_string_dilaton_volume, closed_volume};
use wpvol::kdv::build_table;
use wpvol::kernel::{kernel_f, published_kernel};
use wpvol::recursion::{is_stable, recursion_rhs};
use wpvol::reference::reference_volume;
use wpvol::report::{Report, Status};
use wpvol::verify::{kernels_suite, open_reference_keys, Verifier};
use wpvol::{VolumeCache, VolumePolynomial};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn from_report(r: &Report) -> Outcome {
    let passed = r.count(Status::Pass);
    match r.failures().next() {
        Some(f) => Err(format!("{} failures, first: {f}", r.count(Status::Fail))),
        None if passed == 0 => Err("nothing was checked".into()),
        None => Ok(format!("{passed} checks")),
    }
}

fn reference_table(cache: &VolumeCache) -> Outcome {
    let start = Instant::now();
    let r = Verifier::new(cache, 6).table_suite().map_err(|e| e.to_string())?;
    let summary = from_report(&r)?;
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{summary} in {elapsed:.2?}"))
}

fn kernel_table() -> Outcome {
    for k in 1..=4 {
        if kernel_f(k).coeffs() != &published_kernel(k).unwrap()[..] {
            return Err(format!("F_{} differs", 2 * k - 1));
        }
    }
    Ok("F_1, F_3, F_5, F_7".into())
}

fn worked_example(cache: &VolumeCache) -> Outcome {
    let rhs = recursion_rhs(1, 2, cache).map_err(|e| e.to_string())?;
    let expected = VolumePolynomial::from_terms(
        1,
        2,
        [
            (0, vec![2, 0], ratio(5, 96)),
            (0, vec![1, 1], ratio(1, 16)),
            (0, vec![0, 2], ratio(1, 96)),
            (1, vec![1, 0], ratio(1, 2)),
            (1, vec![0, 1], ratio(1, 6)),
            (2, vec![0, 0], ratio(1, 2)),
        ],
    )
    .map_err(|e| e.to_string())?;
    if rhs == expected {
        Ok("assembled right-hand side for (1,2)".into())
    } else {
        Err(format!("got {rhs}"))
    }
}

fn identities_at_2pi_i(cache: &VolumeCache) -> Outcome {
    let mut report = Report::new();
    let mut keys = cache.keys();
    keys.sort_unstable();
    for (g, m) in keys {
        if m == 0 {
            continue;
        }
        let n = m - 1;
        if n == 0 && g == 0 || n > 0 && !is_stable(g, n) {
            continue;
        }
        let sd = check_string_dilaton_volume(g, n, cache).map_err(|e| e.to_string())?;
        report.extend(sd);
        if n > 0 {
            report.push(check_second_derivative(g, n, cache).map_err(|e| e.to_string())?);
        }
    }
    for g in 1..=5 {
        let r = check_string_dilaton_volume(g, 0, cache).map_err(|e| e.to_string())?;
        report.extend(r);
    }
    from_report(&report)
}

fn closed_volumes(cache: &VolumeCache) -> Outcome {
    let v20 = closed_volume(2, cache).map_err(|e| e.to_string())?;
    let v30 = closed_volume(3, cache).map_err(|e| e.to_string())?;
    if v20.as_single_term() != Some((ratio(43, 2160), 3)) {
        return Err(format!("V_(2,0) = {v20}"));
    }
    if v30.as_single_term() != Some((ratio(176557, 1209600), 6)) {
        return Err(format!("V_(3,0) = {v30}"));
    }
    for g in 4..=5 {
        let v = closed_volume(g, cache).map_err(|e| e.to_string())?;
        if Some(&v) != reference_volume(g, 0).as_ref() {
            return Err(format!("V_({g},0) = {v}"));
        }
    }
    Ok("V_(2,0) .. V_(5,0)".into())
}

fn zograf(cache: &VolumeCache) -> Outcome {
    from_report(&Verifier::new(cache, 6).zograf_suite().map_err(|e| e.to_string())?)
}

fn kontsevich(cache: &VolumeCache) -> Outcome {
    let start = Instant::now();
    let r = Verifier::new(cache, 6).kontsevich_suite().map_err(|e| e.to_string())?;
    let summary = from_report(&r)?;
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("(0,3), (1,1), (0,4), (1,2): {summary} in {elapsed:.2?}"))
}

fn kdv_virasoro(cache: &VolumeCache) -> Outcome {
    let table = build_table(6, cache).map_err(|e| e.to_string())?;
    let mut report = wpvol::kdv::check_kdv_all(6, &table);
    report.extend(wpvol::kdv::check_virasoro_all(&[-1, 0, 1, 2], &table).map_err(|e| e.to_string())?);
    let summary = from_report(&report)?;
    Ok(format!("{summary}, {} undecidable at level 6", report.count(Status::Inconclusive)))
}

fn quadrature() -> Outcome {
    from_report(&kernels_suite().map_err(|e| e.to_string())?)
}

fn asymptotics(cache: &VolumeCache) -> Outcome {
    let mut report = check_boundary_trend(2..=5, cache).map_err(|e| e.to_string())?;
    for (g, n) in open_reference_keys() {
        report.push(check_bracket_ratios(g, n, cache).map_err(|e| e.to_string())?);
    }
    let r1 = wpvol::asymptotics::bracket_ratio(1, &[0], cache).map_err(|e| e.to_string())?;
    if (r1.coeff.clone(), r1.p_exp) != (int(1), 0) {
        return Err("[tau_0]_1 / V_(1,1)(0) is not exactly 1".into());
    }
    from_report(&report)
}

fn invariants(cache: &VolumeCache) -> Outcome {
    from_report(&Verifier::new(cache, 6).invariants_suite().map_err(|e| e.to_string())?)
}

fn main() {
    let cache = VolumeCache::new();
    let criteria: Vec<Criterion> = vec![
        ("reference table reproduced exactly", Box::new(|| reference_table(&cache))),
        ("kernel polynomials", Box::new(kernel_table)),
        ("worked example right-hand side", Box::new(|| worked_example(&cache))),
        ("string, dilaton and second derivative at 2πi", Box::new(|| identities_at_2pi_i(&cache))),
        ("closed volumes from V_(g,1)", Box::new(|| closed_volumes(&cache))),
        ("Zograf recursion, 4 <= n <= 8", Box::new(|| zograf(&cache))),
        ("Kontsevich ribbon-graph formula", Box::new(|| kontsevich(&cache))),
        ("KdV and Virasoro at level 6", Box::new(|| kdv_virasoro(&cache))),
        ("kernel quadrature and D, R identities", Box::new(quadrature)),
        ("large-genus ratio trends", Box::new(|| asymptotics(&cache))),
        ("volume invariants and reconstruction", Box::new(|| invariants(&cache))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
