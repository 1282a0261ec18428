#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_repvar");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

pub fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

pub fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("REPVAR_MAX_ENUM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("failed to run repvar");
    Run {
        code: out.status.code().expect("terminated by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// A recorded invocation. Successful runs are compared on stdout
/// (`<name>.out`), failing ones on stderr (`<name>.err`).
pub struct Golden {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

const P: &str = "[1,1;0,1];[1,0;1,1]";

pub const GOLDEN: &[Golden] = &[
    Golden { name: "eval_product", args: &["eval", "--group", "sl2:p=5", "--word", "a b", "--point", P], code: 0 },
    Golden { name: "eval_empty_word", args: &["eval", "--group", "sl2:p=5", "--word", "", "--point", P], code: 0 },
    Golden {
        name: "eval_malformed",
        args: &["eval", "--group", "sl2:p=5", "--word", "a b", "--point", "[1,x;0,1];[1,0;1,1]"],
        code: 1,
    },
    Golden { name: "eval_rational", args: &["eval", "--group", "sl2:Q", "--word", "a^-1", "--point", "[2,3;1,2]"], code: 0 },
    Golden { name: "act_s12", args: &["act", "--group", "sl2:p=5", "--auto", "nielsen:s12", "--point", P], code: 0 },
    Golden {
        name: "act_quotient",
        args: &["act", "--group", "sl2:p=3", "--auto", "nielsen:s12", "--point", P, "--quotient", "inner:[0,1;-1,0]"],
        code: 0,
    },
    Golden { name: "act_identity", args: &["act", "--group", "psl2:p=5", "--point", "[4,0;0,4];[4,3;0,4]"], code: 0 },
    Golden {
        name: "kernel_sl2_p5",
        args: &["kernel-test", "--group", "sl2:p=5", "--n", "2", "--all-nielsen", "--trials", "10000", "--seed", "7"],
        code: 0,
    },
    Golden {
        name: "kernel_sl2_p3_exhaustive",
        args: &["kernel-test", "--group", "sl2:p=3", "--n", "2", "--all-nielsen", "--mode", "exhaustive"],
        code: 0,
    },
    Golden {
        name: "kernel_center_exhaustive",
        args: &["kernel-test", "--group", "center:p=5", "--n", "2", "--all-nielsen", "--mode", "exhaustive"],
        code: 0,
    },
    Golden {
        name: "kernel_identity_undetermined",
        args: &["kernel-test", "--group", "sl2:p=5", "--n", "2", "--auto", "id", "--trials", "50"],
        code: 2,
    },
    Golden {
        name: "identity_delta2_sl2_p5",
        args: &["identity-test", "--group", "sl2:p=5", "--derived", "2", "--seed", "3"],
        code: 0,
    },
    Golden {
        name: "identity_delta2_borel_p7",
        args: &["identity-test", "--group", "borel:p=7", "--derived", "2", "--trials", "1000", "--seed", "3"],
        code: 2,
    },
    Golden { name: "trace_commutator_text", args: &["trace", "--n", "2", "--word", "a b A B", "--output", "text"], code: 0 },
    Golden { name: "trace_commutator", args: &["trace", "--n", "2", "--word", "a b A B"], code: 0 },
    Golden { name: "induced_inv1", args: &["induced-trace-action", "--n", "2", "--auto", "nielsen:inv1"], code: 0 },
    Golden { name: "induced_swap", args: &["induced-trace-action", "--n", "2", "--auto", "nielsen:tau1"], code: 0 },
    Golden { name: "induced_inner", args: &["induced-trace-action", "--n", "3", "--auto", "inner:a B"], code: 0 },
    Golden { name: "weyl_a2_d5", args: &["weyl-classify", "--factors", "A2,D5"], code: 0 },
    Golden { name: "weyl_c3_e7", args: &["weyl-classify", "--factors", "C3,E7"], code: 0 },
    Golden { name: "braid_n5", args: &["braid-check", "--n", "5"], code: 0 },
    Golden { name: "quadric_sl2_p3", args: &["quadric", "--group", "sl2:p=3", "--n", "2"], code: 0 },
    Golden { name: "quadric_rational", args: &["quadric", "--group", "sl2:Q", "--element", "[2,3;1,2]"], code: 0 },
];

pub fn golden_path(name: &str, code: i32) -> PathBuf {
    let ext = if code == 1 { "err" } else { "out" };
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.{ext}"))
}

/// Runs one golden case. With `REPVAR_UPDATE_GOLDEN=1` the file is rewritten
/// instead of compared.
pub fn check_golden(g: &Golden) -> Result<(), String> {
    let r = run(g.args);
    if r.code != g.code {
        return Err(format!("{}: exit {} (expected {}), stderr: {}", g.name, r.code, g.code, r.stderr));
    }
    let actual = if g.code == 1 { &r.stderr } else { &r.stdout };
    let path = golden_path(g.name, g.code);
    if std::env::var("REPVAR_UPDATE_GOLDEN").as_deref() == Ok("1") {
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if *actual != expected {
        return Err(format!("{}: output differs from golden\n--- expected\n{expected}--- actual\n{actual}", g.name));
    }
    Ok(())
}

pub fn schema(command: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{command}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Validates a command's JSON output against its shipped schema.
pub fn validate(output: &Value) -> Result<(), String> {
    let command = output["command"].as_str().ok_or("missing command key")?;
    let validator = jsonschema::validator_for(&schema(command)).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(output).map(|e| format!("{e} at {}", e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}
