use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use pde_iss_core::validation::{IssReport, LemmaSuiteReport};
use pde_iss_core::{
    convergence_study, run_lemma_suite, simulate, synthesize_certificate, verify_iss_trajectory,
    Certificate, Synthesis, Tolerances,
};

use crate::config::RunConfig;
use crate::{fail, Outcome, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

/// A parsed config together with the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub base_dir: PathBuf,
}

impl Loaded {
    pub fn from_file(path: &Path) -> Result<Self> {
        let (config, _) = RunConfig::load(path)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { config, base_dir })
    }
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

/// Certificate from `[certificate] file`, or synthesized when no file is named.
fn certificate(loaded: &Loaded) -> Result<std::result::Result<Certificate, String>> {
    let cfg = &loaded.config;
    let block = cfg
        .certificate
        .as_ref()
        .ok_or_else(|| fail(EXIT_CONFIG, "config has no [certificate] block"))?;
    if let Some(file) = &block.file {
        let path = loaded.base_dir.join(file);
        let text = std::fs::read_to_string(&path).map_err(|e| {
            fail(
                EXIT_CONFIG,
                format!("certificate file {}: {e}", path.display()),
            )
        })?;
        return Ok(Ok(Certificate::from_json(&text)?));
    }
    let p = cfg.problem()?;
    let opts = block.options();
    Ok(
        match synthesize_certificate(&p.bc, p.m1, p.m2, p.form, &opts)? {
            Synthesis::Feasible(cert) => Ok(cert),
            Synthesis::Infeasible(inf) => Err(inf.reason),
        },
    )
}

pub fn certify(loaded: &Loaded, out: Option<&Path>) -> Result<Outcome> {
    let cfg = &loaded.config;
    let block = cfg
        .certificate
        .as_ref()
        .ok_or_else(|| fail(EXIT_CONFIG, "config has no [certificate] block"))?;
    let p = cfg.problem()?;
    match synthesize_certificate(&p.bc, p.m1, p.m2, p.form, &block.options())? {
        Synthesis::Feasible(cert) => {
            let json = cert.to_json() + "\n";
            if let Some(path) = out {
                write_out(path, &json)?;
            }
            Ok(Outcome::ok(json))
        }
        Synthesis::Infeasible(inf) => Ok(Outcome {
            code: EXIT_INFEASIBLE,
            stdout: String::new(),
            stderr: format!("infeasible: {}\n", inf.reason),
        }),
    }
}

pub fn simulate_cmd(loaded: &Loaded, out: Option<&Path>) -> Result<Outcome> {
    let cfg = &loaded.config;
    let p = cfg.problem()?;
    let trace = simulate(&cfg.scenario(&p)?)?;
    let csv = trace.to_csv();
    match out {
        Some(path) => {
            write_out(path, &csv)?;
            Ok(Outcome::ok(format!(
                "wrote {} rows to {}\n",
                trace.len(),
                path.display()
            )))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

pub fn validate(loaded: &Loaded, out: Option<&Path>) -> Result<Outcome> {
    let cfg = &loaded.config;
    let cert = match certificate(loaded)? {
        Ok(c) => c,
        Err(reason) => {
            return Ok(Outcome {
                code: EXIT_INFEASIBLE,
                stdout: String::new(),
                stderr: format!("infeasible: {reason}\n"),
            })
        }
    };
    let p = cfg.problem()?;
    let trace = simulate(&cfg.scenario(&p)?)?;
    let tol = Tolerances {
        rel_tol: cfg.validation.rel_tol,
        abs_tol: cfg.validation.abs_tol,
    };
    let mut stdout = String::new();
    let mut all_pass = true;
    let mut json = serde_json::Map::new();
    for form in cfg.validation.forms() {
        let r: IssReport =
            verify_iss_trajectory(&trace, &cert, &p.bc, p.m1, p.m2, &p.d1, &p.d2, form, tol)?;
        all_pass &= r.pass;
        let name = serde_json::to_value(form)?
            .as_str()
            .unwrap_or_default()
            .to_owned();
        let _ = write!(
            stdout,
            "{name} {} max_relative_violation={:.6e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.max_relative_violation
        );
        if let Some(t) = r.first_violation_time {
            let _ = write!(stdout, " first_violation_t={t}");
        }
        stdout.push('\n');
        json.insert(name, serde_json::from_str(&r.to_json())?);
    }
    if let Some(path) = out {
        let doc = serde_json::json!({
            "path": cert.path.to_string(),
            "c_decay": cert.c_decay,
            "pass": all_pass,
            "forms": json,
        });
        write_out(path, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(Outcome {
        code: if all_pass { EXIT_OK } else { EXIT_VALIDATION },
        stdout,
        stderr: String::new(),
    })
}

pub fn lemma_line(r: &LemmaSuiteReport) -> String {
    let mut line = format!(
        "lemma-check samples={} seed={} {}",
        r.samples,
        r.seed,
        if r.pass { "PASS" } else { "FAIL" }
    );
    for s in &r.stats {
        let _ = write!(line, " {}={:.3e}", s.check, s.min_slack);
        if s.failures > 0 {
            let _ = write!(line, "(failures={}, sample={})", s.failures, s.worst_sample);
        }
    }
    line.push('\n');
    line
}

pub fn lemma_check(samples: usize, seed: u64) -> Result<Outcome> {
    if samples == 0 {
        return Err(fail(EXIT_CONFIG, "--samples must be at least 1"));
    }
    let r = run_lemma_suite(samples, seed)?;
    Ok(Outcome {
        code: if r.pass { EXIT_OK } else { EXIT_VALIDATION },
        stdout: lemma_line(&r),
        stderr: String::new(),
    })
}

pub fn convergence(loaded: &Loaded) -> Result<Outcome> {
    let cfg = &loaded.config;
    let block = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| fail(EXIT_CONFIG, "config has no [convergence] block"))?;
    let p = cfg.problem()?;
    let template = cfg.scenario(&p)?;
    let mu = p.bc.mu;
    let solution = block.solution;
    let r = convergence_study(&template, |t, x| solution.value(t, x, mu), &block.grids)
        .context("convergence study")?;
    let mut stdout = format!("{:>8} {:>14} {:>8}\n", "n_cells", "error", "order");
    for (i, row) in r.rows.iter().enumerate() {
        let order = match i {
            0 => "-".to_owned(),
            _ => {
                let prev = r.rows[i - 1].error;
                if prev > 0.0 && row.error > 0.0 {
                    format!("{:.4}", (prev / row.error).log2())
                } else {
                    "-".to_owned()
                }
            }
        };
        let _ = writeln!(
            stdout,
            "{:>8} {:>14.6e} {:>8}",
            row.n_cells, row.error, order
        );
    }
    match r.order {
        Some(o) => {
            let _ = writeln!(stdout, "order={o:.4}");
        }
        None => stdout.push_str("degenerate\n"),
    }
    Ok(Outcome::ok(stdout))
}
