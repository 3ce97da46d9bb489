use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use fracwell::config::{OutputFormat, RunConfig};
use fracwell::consistency::{run_scan_with, shift_off_boundary, Method};
use fracwell::contour::contour_evaluate;
use fracwell::parallel::Execution;
use fracwell::quadrature::{direct_integral, DirectMethod, ToleranceSpec};
use fracwell::report::{format_f64, write_atomic, write_csv, write_json};
use fracwell::spectral::{check_grid_size, eigenmode_error, sfse_residual};
use fracwell::symbol::{abs_power, symbol_identity_residual};
use fracwell::well::{piecewise_state, validate_alpha, ScaledPosition, StateIndex, WellConfig};
use fracwell::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{
    FormatArg, IntegrateArgs, MethodArg, ScanArgs, SpectralCheckArgs, SymbolCheckArgs, WellArgs, EXIT_CELL_FAILURES,
    EXIT_IO, EXIT_NOT_CONVERGED, EXIT_NO_INPUT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION,
};

pub const SYMBOL_THRESHOLD: f64 = 1e-12;
pub const EIGENMODE_THRESHOLD: f64 = 1e-10;

fn usage(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn well_config(args: &WellArgs, alpha: f64) -> fracwell::Result<WellConfig> {
    let cfg = WellConfig::new(args.a, args.hbar, args.d_alpha, alpha, args.amplitude)?;
    Ok(if args.normalized_amplitude {
        cfg.with_normalized_amplitude()
    } else {
        cfg
    })
}

pub fn symbol_check(args: &SymbolCheckArgs) -> u8 {
    for alpha in [args.alpha_min, args.alpha_max] {
        if let Err(e) = validate_alpha(alpha) {
            return usage(e);
        }
    }
    if args.alpha_min > args.alpha_max {
        return usage(format!("alpha range [{}, {}] is empty", args.alpha_min, args.alpha_max));
    }
    if !(args.q_max.is_finite() && args.q_max > 0.0) || args.samples == 0 {
        return usage("q-max must be positive and samples at least 1");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: Option<(f64, f64, f64)> = None;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.per_sample {
        let _ = writeln!(out, "q,alpha,relative_residual");
    }
    for _ in 0..args.samples {
        let q = rng.gen_range(-args.q_max..=args.q_max);
        let alpha = if args.alpha_min == args.alpha_max {
            args.alpha_min
        } else {
            rng.gen_range(args.alpha_min..=args.alpha_max)
        };
        let scale = abs_power(q, alpha);
        let residual = symbol_identity_residual(q, alpha);
        let relative = if scale > 0.0 { residual / scale } else { residual };
        if args.per_sample {
            let _ = writeln!(out, "{},{},{}", format_f64(q), format_f64(alpha), format_f64(relative));
        }
        if worst.is_none_or(|w| relative > w.0) {
            worst = Some((relative, q, alpha));
        }
    }
    let worst = worst.expect("at least one sample");
    let pass = worst.0 < SYMBOL_THRESHOLD;
    let _ = writeln!(
        out,
        "samples={} max_relative_residual={} worst_q={} worst_alpha={} threshold={} status={}",
        args.samples,
        format_f64(worst.0),
        format_f64(worst.1),
        format_f64(worst.2),
        format_f64(SYMBOL_THRESHOLD),
        if pass { "pass" } else { "fail" }
    );
    if pass {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

struct Evaluation {
    value: Complex64,
    error_estimate: f64,
    evaluations: u64,
    converged: bool,
}

pub fn integrate(args: &IntegrateArgs) -> u8 {
    let cfg = match well_config(&args.well, args.alpha) {
        Ok(cfg) => cfg,
        Err(e) => return usage(e),
    };
    let n = match StateIndex::new(args.n) {
        Ok(n) => n,
        Err(e) => return usage(e),
    };
    let tol = match ToleranceSpec::new(args.abs_tol, args.rel_tol, args.max_evaluations) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let (x_tilde, note) = shift_off_boundary(args.x_tilde);
    let position = match ScaledPosition::new(x_tilde) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let method = match args.method {
        MethodArg::DirectTail => Method::DirectTail,
        MethodArg::DirectAbel => Method::DirectAbel,
        MethodArg::Contour => Method::Contour,
    };

    let start = Instant::now();
    let result = match method {
        Method::DirectTail | Method::DirectAbel => {
            let route = if method == Method::DirectTail {
                DirectMethod::TailAcceleration
            } else {
                DirectMethod::AbelLadder
            };
            direct_integral(&cfg, n, position, route, &tol).map(|r| Evaluation {
                value: r.value,
                error_estimate: r.abs_error_estimate,
                evaluations: r.evaluations,
                converged: r.converged,
            })
        }
        Method::Contour => contour_evaluate(&cfg, n, position, &tol).map(|e| Evaluation {
            value: e.total,
            error_estimate: e.abs_error_estimate,
            evaluations: e.evaluations,
            converged: e.converged,
        }),
    };
    let wall_time = start.elapsed().as_secs_f64();
    let mut annotations: Vec<String> = note.into_iter().collect();
    let eval = match result {
        Ok(e) => e,
        Err(e) => {
            annotations.push(e.to_string());
            Evaluation {
                value: Complex64::new(f64::NAN, f64::NAN),
                error_estimate: f64::NAN,
                evaluations: 0,
                converged: false,
            }
        }
    };
    let piecewise = piecewise_state(&cfg, n, x_tilde * cfg.a());

    let columns = [
        ("method", method.as_str().to_string()),
        ("alpha", format_f64(args.alpha)),
        ("n", n.get().to_string()),
        ("x_tilde", format_f64(x_tilde)),
        ("piecewise", format_f64(piecewise)),
        ("value_re", format_f64(eval.value.re)),
        ("value_im", format_f64(eval.value.im)),
        ("error_estimate", format_f64(eval.error_estimate)),
        ("evaluations", eval.evaluations.to_string()),
        ("wall_time", format_f64(wall_time)),
        ("converged", eval.converged.to_string()),
        ("annotations", annotations.join("; ")),
    ];
    let printed = match args.format {
        FormatArg::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(io::stdout());
            writer
                .write_record(columns.iter().map(|(k, _)| *k))
                .and_then(|_| writer.write_record(columns.iter().map(|(_, v)| v)))
                .and_then(|_| writer.flush().map_err(csv::Error::from))
                .is_ok()
        }
        FormatArg::Json => {
            let finite = |v: f64| if v.is_finite() { json!(v) } else { json!(null) };
            let object = json!({
                "method": method.as_str(),
                "alpha": args.alpha,
                "n": n.get(),
                "x_tilde": x_tilde,
                "piecewise": piecewise,
                "value_re": finite(eval.value.re),
                "value_im": finite(eval.value.im),
                "error_estimate": finite(eval.error_estimate),
                "evaluations": eval.evaluations,
                "wall_time": wall_time,
                "converged": eval.converged,
                "annotations": annotations.join("; "),
            });
            writeln!(io::stdout(), "{object}").is_ok()
        }
    };
    if !printed {
        return EXIT_IO;
    }
    if eval.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

pub fn scan(args: &ScanArgs) -> u8 {
    let mut cfg = match RunConfig::from_path(&args.config) {
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return EXIT_NO_INPUT;
        }
        Ok(Err(e)) => return usage(format!("{}: {e}", args.config.display())),
        Ok(Ok(cfg)) => cfg,
    };
    if let Some(output) = &args.output {
        cfg.output = (output != Path::new("-")).then(|| output.clone());
    }
    if let Some(format) = args.format {
        cfg.format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }

    let report = match run_scan_with(&cfg.spec, Execution::from_workers(cfg.workers)) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let mut bytes = Vec::new();
    let rendered = match cfg.format {
        OutputFormat::Csv => write_csv(&report, &mut bytes),
        OutputFormat::Json => write_json(&report, &mut bytes),
    };
    let written = rendered.and_then(|_| match &cfg.output {
        Some(path) => write_atomic(path, &bytes),
        None => io::stdout().write_all(&bytes),
    });
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_IO;
    }

    let summary = &report.summary;
    eprintln!("rows={} failed_cells={}", report.rows.len(), summary.failed_cells);
    for s in &summary.methods {
        eprintln!(
            "alpha={} method={} max_abs_delta={} median_abs_delta={} failures={}",
            format_f64(s.alpha),
            s.method,
            s.max_abs_delta.map_or("-".into(), format_f64),
            s.median_abs_delta.map_or("-".into(), format_f64),
            s.failures
        );
    }
    for d in &summary.disagreement {
        eprintln!(
            "alpha={} max_cross_method={}",
            format_f64(d.alpha),
            d.max_cross_method.map_or("-".into(), format_f64)
        );
    }
    if summary.failed_cells > 0 {
        EXIT_CELL_FAILURES
    } else {
        EXIT_OK
    }
}

pub fn spectral_check(args: &SpectralCheckArgs) -> u8 {
    if let Err(e) = check_grid_size(args.grid) {
        return usage(e);
    }
    let cfg = match well_config(&args.well, args.alpha) {
        Ok(cfg) => cfg,
        Err(e) => return usage(e),
    };
    let n = match StateIndex::new(args.n) {
        Ok(n) => n,
        Err(e) => return usage(e),
    };
    let period = args.period * cfg.a();
    let mode_error = match eigenmode_error(args.grid, period, args.alpha, args.mode) {
        Ok(e) => e,
        Err(e) => return usage(e),
    };
    let residual = match sfse_residual(&cfg, n, args.grid, period) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let pass = mode_error < EIGENMODE_THRESHOLD;
    println!(
        "grid={} period={} alpha={} mode={} eigenmode_relative_error={} threshold={} status={}",
        args.grid,
        format_f64(period),
        format_f64(args.alpha),
        args.mode,
        format_f64(mode_error),
        format_f64(EIGENMODE_THRESHOLD),
        if pass { "pass" } else { "fail" }
    );
    println!(
        "n={} energy={} guard_width={} interior_max={} exterior_max={}",
        n.get(),
        format_f64(residual.energy),
        format_f64(residual.guard_width),
        format_f64(residual.interior_max),
        format_f64(residual.exterior_max)
    );
    if pass {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}
