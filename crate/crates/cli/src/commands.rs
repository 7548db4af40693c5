//! One function per verb. Each writes machine output to `out`, diagnostics to
//! `err`, and returns the process exit code.

use std::io::Write;

use dfakit::dfa::inclusion_report;
use dfakit::{AlgebraReport64, ComplexMatrix64, Error, KrausChannel64, RankPolicy};
use serde_json::{json, Map, Value};

use crate::check::{run_check, EnsembleSpec};
use crate::cli::{CheckArgs, RandomArgs, ReduceArgs, ReportArgs, ValidateArgs};
use crate::exit;
use crate::format::{read_channel, render_channel, write_channel};

fn load(path: &std::path::Path, err: &mut dyn Write) -> Result<KrausChannel64, u8> {
    read_channel(path).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        exit::IO
    })
}

fn emit(out: &mut dyn Write, err: &mut dyn Write, text: &str) -> u8 {
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "error: writing output: {e}");
            exit::IO
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn positive(name: &str, x: f64, err: &mut dyn Write) -> Result<(), u8> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        let _ = writeln!(err, "error: --{name} must be a positive finite number, got {x}");
        Err(exit::IO)
    }
}

pub fn validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(code) = positive("tol", args.tol, err) {
        return code;
    }
    let ch = match load(&args.path, err) {
        Ok(ch) => ch,
        Err(code) => return code,
    };
    let flags = ch.validate(args.tol);
    let text = if args.json {
        to_json(&json!({
            "dim": ch.dim(),
            "num_kraus": ch.num_kraus(),
            "unital": flags.unital,
            "trace_preserving": flags.trace_preserving,
            "unital_residual": flags.unital_residual,
            "trace_residual": flags.trace_residual,
        }))
    } else {
        format!(
            "unital: {} (residual {:.3e})\ntrace_preserving: {} (residual {:.3e})\n",
            flags.unital, flags.unital_residual, flags.trace_preserving, flags.trace_residual
        )
    };
    let code = emit(out, err, &text);
    if code != exit::SUCCESS {
        return code;
    }
    if flags.is_valid() {
        exit::SUCCESS
    } else {
        exit::FAILURE
    }
}

pub fn matrix_value(m: &ComplexMatrix64) -> Value {
    let part = |f: fn(&dfakit::C64) -> f64| -> Value {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect::<Vec<f64>>())
            .collect::<Vec<_>>()
            .into()
    };
    json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

pub fn report_value(ch: &KrausChannel64, r: &AlgebraReport64, emit_basis: bool) -> Value {
    let residuals: Map<String, Value> = r.residuals.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut doc = json!({
        "dim": ch.dim(),
        "num_kraus": ch.num_kraus(),
        "dim_a_comm": r.dim_a_comm,
        "dim_fixed": r.dim_fixed,
        "dim_dfa": r.dim_dfa,
        "dim_b_comm": r.dim_b_comm,
        "chain_ok": r.chain_ok,
        "oracle_distance": r.oracle_distance,
        "luders_applicable": r.luders_applicable,
        "luders_ok": r.luders_ok,
        "residuals": residuals,
    });
    if emit_basis {
        doc["dfa_basis"] = r.subspaces.dfa.basis().iter().map(matrix_value).collect::<Vec<_>>().into();
    }
    doc
}

pub fn report(args: &ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(code) = positive("tol", args.tol, err).and_then(|_| positive("rank-rtol", args.rank_rtol, err)) {
        return code;
    }
    let ch = match load(&args.path, err) {
        Ok(ch) => ch,
        Err(code) => return code,
    };
    let r = match inclusion_report(&ch, RankPolicy::new(args.rank_rtol), args.tol) {
        Ok(r) => r,
        Err(e @ (Error::NotUnital(_) | Error::NotTracePreserving(_))) => {
            let _ = writeln!(err, "refused: {e}");
            return exit::FAILURE;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::FAILURE;
        }
    };
    let code = emit(out, err, &to_json(&report_value(&ch, &r, args.emit_basis)));
    if code != exit::SUCCESS {
        return code;
    }
    let luders = match r.luders_ok {
        Some(ok) => ok.to_string(),
        None => "n/a".into(),
    };
    let _ = writeln!(
        err,
        "n={} m={}  dim A'={} M={} N={} B'={}  chain_ok={} oracle_distance={:.3e} luders_ok={}",
        ch.dim(),
        ch.num_kraus(),
        r.dim_a_comm,
        r.dim_fixed,
        r.dim_dfa,
        r.dim_b_comm,
        r.chain_ok,
        r.oracle_distance,
        luders
    );
    if r.chain_ok && r.luders_ok != Some(false) {
        exit::SUCCESS
    } else {
        exit::FAILURE
    }
}

fn store(out_path: Option<&std::path::Path>, ch: &KrausChannel64, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match out_path {
        Some(path) => match write_channel(path, ch) {
            Ok(()) => exit::SUCCESS,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                exit::IO
            }
        },
        None => emit(out, err, &render_channel(ch)),
    }
}

pub fn random(args: &RandomArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if args.n == 0 || args.k == 0 {
        let _ = writeln!(err, "error: n and k must be positive");
        return exit::IO;
    }
    let ch = match dfakit::random::random_channel::<f64>(args.kind, args.n, args.k, args.seed) {
        Ok(ch) => ch,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::FAILURE;
        }
    };
    store(args.out.as_deref(), &ch, out, err)
}

pub fn reduce(args: &ReduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(code) = positive("tol", args.tol, err).and_then(|_| positive("rank-rtol", args.rank_rtol, err)) {
        return code;
    }
    let ch = match load(&args.path, err) {
        Ok(ch) => ch,
        Err(code) => return code,
    };
    let red = ch.reduce_kraus(RankPolicy::new(args.rank_rtol));
    let residual = match red.reduced.action_distance(&ch) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::FAILURE;
        }
    };
    let code = store(args.out.as_deref(), &red.reduced, out, err);
    if code != exit::SUCCESS {
        return code;
    }
    let line = format!("m={} l={} action_residual={:.3e}\n", ch.num_kraus(), red.reduced.num_kraus(), residual);
    let code = if args.out.is_some() {
        emit(out, err, &line)
    } else {
        let _ = err.write_all(line.as_bytes());
        exit::SUCCESS
    };
    if code != exit::SUCCESS {
        return code;
    }
    if residual < args.tol {
        exit::SUCCESS
    } else {
        let _ = writeln!(err, "reduction changed the channel action by {residual:.3e}");
        exit::FAILURE
    }
}

pub fn check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Some(t) = args.tol {
        if let Err(code) = positive("tol", t, err) {
            return code;
        }
    }
    if let Err(code) = positive("rank-rtol", args.rank_rtol, err) {
        return code;
    }
    let spec = EnsembleSpec {
        kinds: args.kinds.clone(),
        dims: args.dims.clone(),
        counts: args.counts.clone(),
        channels: args.channels,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
        rank_rtol: args.rank_rtol,
    };
    let summary = match run_check(&spec) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit::IO;
        }
    };
    let text = if args.json {
        to_json(&serde_json::to_value(&summary).expect("serializable"))
    } else {
        let mut s = format!("{} channels (seed {})\n", summary.channels, spec.seed);
        for p in &summary.properties {
            let worst = p.worst.map(|id| format!("  worst: {id}")).unwrap_or_default();
            s.push_str(&format!(
                "{} {:<32} max {:.3e}  threshold {:.1e}  ({} checked){}\n",
                if p.pass { "PASS" } else { "FAIL" },
                p.name,
                p.max_residual,
                p.threshold,
                p.checked,
                worst
            ));
        }
        for (id, e) in &summary.errors {
            s.push_str(&format!("ERROR {id}: {e}\n"));
        }
        s
    };
    let code = emit(out, err, &text);
    if code != exit::SUCCESS {
        return code;
    }
    if summary.pass() {
        exit::SUCCESS
    } else {
        match summary.first_failure() {
            Some(p) => {
                let _ = writeln!(err, "failed: {} (max {:.3e} vs {:.1e})", p.name, p.max_residual, p.threshold);
            }
            None => {
                let _ = writeln!(err, "failed: {} channel(s) could not be analysed", summary.errors.len());
            }
        }
        exit::FAILURE
    }
}

