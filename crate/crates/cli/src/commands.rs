//! The subcommands, as pure functions from instances to reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use h1k::sample;
use h1k::{
    canonical_factorize_with, classify, construct_witness, verify_decomposition, CircleGrid,
    Classification, ConditionFlag, SpectralHoleSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::instance::{pairs, ConfigOverrides, Expectation, InstanceFile, ProblemInstance};
use crate::report::{
    CorpusRow, CorpusSummary, FactorizationSummary, InputEcho, Report, Tolerances, WitnessSummary,
    REPORT_VERSION,
};

pub const EXIT_EXTREME: i32 = 0;
pub const EXIT_NON_EXTREME: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_NEAR_THRESHOLD: i32 = 3;

/// Largest relative distance of `v₀` from the computed kernel.
const P0_RESIDUAL_TOL: f64 = 1e-9;

/// Run-wide options shared by every subcommand.
#[derive(Clone, Copy, Debug, Default)]
pub struct Settings {
    /// From flags and environment; these win over instance overrides.
    pub overrides: ConfigOverrides,
    pub emit_matrix: bool,
    pub timing: bool,
}

impl Settings {
    fn tolerances(&self, file: &InstanceFile) -> Result<Tolerances> {
        Tolerances::resolve(self.overrides.or(file.config.unwrap_or_default()))
    }
}

/// Exit code as a function of the verdict and its condition flag.
pub fn verdict_exit_code(cls: &Classification) -> i32 {
    if cls.verdict.condition_flag == ConditionFlag::NearThreshold {
        EXIT_NEAR_THRESHOLD
    } else if cls.verdict.is_extreme {
        EXIT_EXTREME
    } else {
        EXIT_NON_EXTREME
    }
}

fn failed(mut report: Report, err: impl std::fmt::Display) -> Report {
    report.error = Some(err.to_string());
    report.exit_code = EXIT_INPUT_ERROR;
    report
}

fn attach_classification(report: &mut Report, cls: &Classification, settings: &Settings) {
    report.verdict = Some(cls.verdict.clone());
    report.factorization = Some(FactorizationSummary::new(
        &cls.factorization,
        cls.verdict.normalization_scale,
    ));
    if settings.emit_matrix {
        report.matrix = Some(cls.matrix.to_rows());
    }
}

/// Witness plus its verification record, or the reason there is none.
fn witness_for(
    cls: &Classification,
    tol: &Tolerances,
) -> std::result::Result<WitnessSummary, String> {
    let quad = tol.quadrature();
    let w = construct_witness(cls, &quad).map_err(|e| e.to_string())?;
    let check = verify_decomposition(&cls.normalized, &w, &cls.holes, &quad, tol.dec_tol)
        .map_err(|e| e.to_string())?;
    Ok(WitnessSummary::new(&w, check))
}

pub fn check(inst: &ProblemInstance, settings: &Settings) -> Result<Report> {
    let start = Instant::now();
    let tol = settings.tolerances(&inst.file)?;
    let mut report = Report::new("check", InputEcho::from(&inst.file), tol);
    let cls = match classify(&inst.f, &inst.holes, &tol.classify()) {
        Ok(cls) => cls,
        Err(e) => return Ok(failed(report, e)),
    };
    attach_classification(&mut report, &cls, settings);
    if !cls.verdict.is_extreme {
        match witness_for(&cls, &tol) {
            Ok(w) => report.witness = Some(w),
            Err(e) => report.witness_error = Some(e),
        }
    }
    report.exit_code = verdict_exit_code(&cls);
    if settings.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

/// Factors the input as given, without normalizing it.
pub fn factorize(inst: &ProblemInstance, settings: &Settings) -> Result<Report> {
    let start = Instant::now();
    let tol = settings.tolerances(&inst.file)?;
    let mut report = Report::new("factorize", InputEcho::from(&inst.file), tol);
    let fac = match canonical_factorize_with(&inst.f, tol.delta_boundary, tol.tol_root) {
        Ok(fac) => fac,
        Err(e) => return Ok(failed(report, e)),
    };
    let grid = CircleGrid::new(128).expect("128 is a valid grid");
    let scale = grid
        .nodes()
        .map(|z| inst.f.eval(z).norm())
        .fold(0.0, f64::max);
    let err = grid
        .nodes()
        .map(|z| (fac.eval(z) - inst.f.eval(z)).norm())
        .fold(0.0, f64::max);
    let mut summary = FactorizationSummary::new(&fac, 1.0);
    summary.round_trip_error = Some(err / scale);
    report.factorization = Some(summary);
    if settings.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

/// Exit 0 when the decomposition verifies, 1 when it does not, 2 when the
/// input is invalid or extreme (no witness exists).
pub fn witness(inst: &ProblemInstance, settings: &Settings) -> Result<Report> {
    let start = Instant::now();
    let tol = settings.tolerances(&inst.file)?;
    let mut report = Report::new("witness", InputEcho::from(&inst.file), tol);
    let cls = match classify(&inst.f, &inst.holes, &tol.classify()) {
        Ok(cls) => cls,
        Err(e) => return Ok(failed(report, e)),
    };
    attach_classification(&mut report, &cls, settings);
    if cls.verdict.is_extreme {
        return Ok(failed(report, "instance is extreme; no witness exists"));
    }
    match witness_for(&cls, &tol) {
        Ok(w) => {
            report.exit_code = if w.check.passed { 0 } else { 1 };
            report.witness = Some(w);
        }
        Err(e) => return Ok(failed(report, e)),
    }
    if settings.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn corpus_row(path: &Path, settings: &Settings) -> CorpusRow {
    let mut row = CorpusRow {
        file: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        error: None,
        extreme: None,
        m: None,
        hole_count: None,
        rank: None,
        kernel_dim: None,
        near_threshold: None,
        witness_pass: None,
        failed_checks: Vec::new(),
    };
    let run = || -> Result<(ProblemInstance, Tolerances, Classification)> {
        let inst = ProblemInstance::read(path)?;
        let tol = settings.tolerances(&inst.file)?;
        let cls = classify(&inst.f, &inst.holes, &tol.classify())?;
        Ok((inst, tol, cls))
    };
    let (inst, tol, cls) = match run() {
        Ok(parts) => parts,
        Err(e) => {
            row.error = Some(format!("{e:#}"));
            return row;
        }
    };
    let v = &cls.verdict;
    row.extreme = Some(v.is_extreme);
    row.m = Some(v.m);
    row.hole_count = Some(v.hole_count);
    row.rank = Some(v.rank);
    row.kernel_dim = Some(v.kernel_dim);
    row.near_threshold = Some(v.condition_flag == ConditionFlag::NearThreshold);

    let mut fail = |name: &str| row.failed_checks.push(name.to_string());
    let v0 = cls.p0.to_vector();
    let v0_norm = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(cls.kernel.projection_residual(&v0) <= P0_RESIDUAL_TOL * v0_norm) {
        fail("p0-in-kernel");
    }
    if v.m > v.hole_count && (v.is_extreme || v.kernel_dim < 2 * (v.m - v.hole_count) + 1) {
        fail("excess-degree-kernel");
    }
    if v.hole_count == 0 && v.is_extreme != (v.m == 0) {
        fail("no-hole-outerness");
    }
    if let Some(Expectation { extreme }) = inst.file.expect {
        if extreme != v.is_extreme {
            fail("expected-verdict");
        }
    }
    if !v.is_extreme {
        let pass = matches!(witness_for(&cls, &tol), Ok(w) if w.check.passed);
        row.witness_pass = Some(pass);
        if !pass {
            row.failed_checks.push("witness".to_string());
        }
    }
    row
}

/// `*.json` files of `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Exit 1 if any row fails a consistency check, otherwise 2 if any row
/// could not be processed, otherwise 0.
pub fn corpus(dir: &Path, settings: &Settings) -> Result<CorpusSummary> {
    let tolerances_default = Tolerances::resolve(settings.overrides)?;
    let files = corpus_files(dir)?;
    let rows: Vec<CorpusRow> = files.par_iter().map(|p| corpus_row(p, settings)).collect();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let inconsistent = rows.iter().filter(|r| !r.failed_checks.is_empty()).count();
    let exit_code = if inconsistent > 0 {
        1
    } else if errors > 0 {
        EXIT_INPUT_ERROR
    } else {
        0
    };
    Ok(CorpusSummary {
        version: REPORT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances_default,
        total: rows.len(),
        consistent: rows.len() - errors - inconsistent,
        errors,
        inconsistent,
        rows,
        exit_code,
    })
}

pub fn format_table(summary: &CorpusSummary) -> String {
    let mut out = format!(
        "{:<32} {:<12} {:>3} {:>3} {:>4} {:>6} {:<8} {}\n",
        "file", "verdict", "m", "M", "rank", "kernel", "witness", "checks"
    );
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    for r in &summary.rows {
        if let Some(e) = &r.error {
            out += &format!("{:<32} {:<12} {}\n", r.file, "ERROR", e.replace('\n', " "));
            continue;
        }
        let verdict = match (r.extreme, r.near_threshold) {
            (Some(true), Some(true)) => "extreme?",
            (Some(false), Some(true)) => "non-extreme?",
            (Some(true), _) => "extreme",
            _ => "non-extreme",
        };
        let witness = match r.witness_pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "-",
        };
        let checks = if r.failed_checks.is_empty() {
            "ok".to_string()
        } else {
            format!("FAILED: {}", r.failed_checks.join(", "))
        };
        out += &format!(
            "{:<32} {:<12} {:>3} {:>3} {:>4} {:>6} {:<8} {}\n",
            r.file,
            verdict,
            opt(r.m),
            opt(r.hole_count),
            opt(r.rank),
            opt(r.kernel_dim),
            witness,
            checks
        );
    }
    out += &format!(
        "{} instances: {} consistent, {} inconsistent, {} errors\n",
        summary.total, summary.consistent, summary.inconsistent, summary.errors
    );
    out
}

/// Writes `count` instance files with known verdicts, drawn from `seed`.
/// Families rotate through outer functions without holes (extreme),
/// excess inner degree, equal-moduli single holes and rank-deficient
/// configurations (all non-extreme).
pub fn generate(seed: u64, count: usize, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut written = Vec::with_capacity(count);
    let mut i = 0usize;
    while written.len() < count {
        i += 1;
        let (f, holes, extreme, family) = match i % 4 {
            1 => {
                let degree = rng.gen_range(1..=6);
                let f = sample::polynomial_with_roots(&mut rng, 0, degree);
                (f, SpectralHoleSet::empty(), true, "outer")
            }
            2 => {
                let big_m = rng.gen_range(0..=3);
                let holes = sample::hole_set(&mut rng, big_m, 10);
                let degree = rng.gen_range(2..=4);
                let f = sample::with_inner_degree(&mut rng, big_m + 1, &holes, degree);
                (f, holes, false, "excess-degree")
            }
            3 => {
                let k = rng.gen_range(3..=6);
                let outer = sample::single_hole_outer(&mut rng, k, true);
                let z = h1k::AnalyticPolynomial::monomial(1, h1k::Complex64::new(1.0, 0.0));
                (
                    &z * &outer,
                    SpectralHoleSet::new(vec![k as u64])?,
                    false,
                    "single-hole-equal",
                )
            }
            _ => {
                let holes = sample::hole_set(&mut rng, 2, 8);
                match sample::rank_deficient(&mut rng, 1, &holes, 200) {
                    Some(f) => (f, holes, false, "rank-deficient"),
                    None => continue,
                }
            }
        };
        let file = InstanceFile {
            coefficients: pairs(f.coeffs()),
            holes: holes.holes().to_vec(),
            config: None,
            expect: Some(Expectation { extreme }),
            note: Some(format!("generated: {family}, seed {seed}")),
        };
        let path = out_dir.join(format!("gen-{seed}-{:03}.json", written.len()));
        std::fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
