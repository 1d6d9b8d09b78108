mod cache;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use omega_core::characteristic::{arnold_crosscheck, theta_chain, theta_dual_class};
use omega_core::complex::{build_quotient_complex, build_sub_complex, verify_complex};
use omega_core::invariants::{
    bouquet_check, codimension_report, complement_cohomology, complement_homology, euler_number,
    stability_quantities, stabilization_report, sub_complex_homology, uct_check,
};
use omega_core::poset::universe;
use omega_core::{
    complex_homology, vassiliev_mul, BigInt, ClosedPoset, Error, Family, ParityPolicy, Pattern, PosetSpec, SnfConfig,
    VassilievElement, Verdict,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::{json, Value};

const SCHEMA: &str = "omega/1";

#[derive(Parser)]
#[command(name = "omega", version, about = "Multiplicity-pattern posets, their complexes and integer homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Result cache directory (default: $OMEGA_CACHE_DIR, then the user cache dir).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Which norm parities the universe admits.
    #[arg(long, global = true, value_enum, default_value_t = Policy::Matched)]
    parity_policy: Policy,

    /// Seed for randomized cross-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Policy {
    Matched,
    All,
}

impl From<Policy> for ParityPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Matched => ParityPolicy::Matched,
            Policy::All => ParityPolicy::All,
        }
    }
}

#[derive(Args, Clone)]
struct Target {
    #[arg(long)]
    d: u32,
    /// reduced-norm-ge:k[,q], max-entry-ge:k, free-group-complement, below:W, at-or-below:W, full
    #[arg(long, value_parser = parse_family, conflicts_with = "generators", required_unless_present = "generators")]
    family: Option<Family>,
    /// Semicolon-separated generators, e.g. "(3,3);(1,2,2,1)".
    #[arg(long, value_parser = parse_generators)]
    generators: Option<::std::vec::Vec<Pattern>>,
}

impl Target {
    fn spec(&self) -> PosetSpec {
        match (&self.family, &self.generators) {
            (Some(f), _) => PosetSpec::Family(f.clone()),
            (None, Some(g)) => PosetSpec::Generators(g.clone()),
            (None, None) => unreachable!("clap requires one of --family/--generators"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the truncated universe of patterns.
    Enumerate {
        #[arg(long)]
        d: u32,
    },
    /// Members, maximal elements and codimensions of a closed poset.
    Poset(Target),
    /// Sub-complex and quotient complex dumps.
    Complex(Target),
    /// Homology of the sub-complex.
    Homology(Target),
    /// Reduced cohomology and homology of the complement.
    Complement(Target),
    /// Euler number census.
    Euler(Target),
    /// Stabilization check from d to dprime.
    Stab {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        dprime: u32,
    },
    /// Bouquet check for the reduced-norm family.
    Bouquet {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: Option<u32>,
    },
    /// Characteristic chain and dual class of a pattern.
    Theta {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        omega: Pattern,
    },
    /// Product table of the truncated ring and its degree cross-check.
    Vassiliev {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
    },
    /// Differential identities on the full complex.
    Verify {
        #[arg(long)]
        d: u32,
    },
    /// Verdicts for the standard checks at one level.
    Report {
        #[arg(long)]
        d: u32,
    },
}

fn parse_family(text: &str) -> Result<Family, String> {
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let ints = || -> Result<Vec<u32>, String> {
        args.split(',')
            .map(|a| a.trim().parse::<u32>().map_err(|e| format!("bad integer {a:?} in {text:?}: {e}")))
            .collect()
    };
    let pattern = || args.parse::<Pattern>().map_err(|e| e.to_string());
    match name {
        "reduced-norm-ge" => match ints()?.as_slice() {
            [k] => Ok(Family::ReducedNormAtLeast { k: *k, q: 0 }),
            [k, q] => Ok(Family::ReducedNormAtLeast { k: *k, q: *q }),
            _ => Err(format!("expected reduced-norm-ge:k[,q], got {text:?}")),
        },
        "max-entry-ge" => match ints()?.as_slice() {
            [k] => Ok(Family::MaxEntryAtLeast { k: *k }),
            _ => Err(format!("expected max-entry-ge:k, got {text:?}")),
        },
        "free-group-complement" if args.is_empty() => Ok(Family::FreeGroupComplement),
        "full" if args.is_empty() => Ok(Family::Full),
        "below" => Ok(Family::StrictlyBelow { omega: pattern()? }),
        "at-or-below" => Ok(Family::AtOrBelow { omega: pattern()? }),
        _ => Err(format!("unknown family {text:?}")),
    }
}

fn parse_generators(text: &str) -> Result<Vec<Pattern>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Pattern>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Poset(_) => "poset",
            Command::Complex(_) => "complex",
            Command::Homology(_) => "homology",
            Command::Complement(_) => "complement",
            Command::Euler(_) => "euler",
            Command::Stab { .. } => "stab",
            Command::Bouquet { .. } => "bouquet",
            Command::Theta { .. } => "theta",
            Command::Vassiliev { .. } => "vassiliev",
            Command::Verify { .. } => "verify",
            Command::Report { .. } => "report",
        }
    }

    /// Canonical description of the computation; hashed into the cache key.
    fn request(&self, policy: ParityPolicy, seed: Option<u64>) -> Value {
        let target = |t: &Target| json!({"d": t.d, "spec": t.spec()});
        let args = match self {
            Command::Enumerate { d } | Command::Verify { d } | Command::Report { d } => json!({"d": d}),
            Command::Poset(t) | Command::Complex(t) | Command::Euler(t) | Command::Complement(t) => target(t),
            Command::Homology(t) => json!({"target": target(t), "seed": seed}),
            Command::Stab { target: t, dprime } => json!({"target": target(t), "dprime": dprime}),
            Command::Bouquet { d, k, q } => json!({"d": d, "k": k, "q": q}),
            Command::Theta { d, omega } => json!({"d": d, "omega": omega}),
            Command::Vassiliev { d, k } => json!({"d": d, "k": k}),
        };
        json!({
            "tool": "omega",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.name(),
            "parity_policy": policy,
            "args": args,
        })
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn build(t: &Target, policy: ParityPolicy) -> Result<ClosedPoset, Error> {
    omega_core::build_poset(&t.spec(), t.d, policy)
}

fn run(cmd: &Command, policy: ParityPolicy, seed: Option<u64>) -> Result<Value, Error> {
    let config = SnfConfig::default();
    Ok(match cmd {
        Command::Enumerate { d } => {
            omega_core::poset::check_degree(*d)?;
            let rows: Vec<Value> = universe(*d, policy)
                .iter()
                .map(|w| json!({"pattern": w, "norm": w.norm(), "reduced_norm": w.reduced_norm(), "degree": d - w.reduced_norm()}))
                .collect();
            json!({"d": d, "count": rows.len(), "patterns": rows})
        }
        Command::Poset(t) => {
            let theta = build(t, policy)?;
            json!({
                "d": t.d,
                "spec": t.spec(),
                "members": theta.members(),
                "maximal_elements": theta.maximal_elements(),
                "satisfies_lambda": theta.satisfies_lambda(),
                "profinite": t.spec().is_profinite(),
                "codimension": codimension_report(&theta).ok(),
                "stability": stability_quantities(&theta).ok(),
            })
        }
        Command::Complex(t) => {
            let theta = build(t, policy)?;
            let sub = build_sub_complex::<i64>(&theta);
            let quotient = build_quotient_complex::<i64>(&theta);
            json!({
                "d": t.d,
                "spec": t.spec(),
                "sub": sub.to_json(),
                "sub_fingerprint": sub.fingerprint(),
                "quotient": quotient.to_json(),
                "quotient_fingerprint": quotient.fingerprint(),
            })
        }
        Command::Homology(t) => {
            let theta = build(t, policy)?;
            let c = build_sub_complex::<i64>(&theta);
            let table = complex_homology(&c, &config)?;
            let mut out = json!({"d": t.d, "spec": t.spec(), "homology": table});
            if let Some(seed) = seed {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let perms = c
                    .basis()
                    .iter()
                    .map(|(&n, b)| {
                        let mut p: Vec<usize> = (0..b.len()).collect();
                        p.shuffle(&mut rng);
                        (n, p)
                    })
                    .collect();
                let shuffled = complex_homology(&c.reorder(&perms), &config)?;
                out["reorder_check"] = json!({"seed": seed, "agrees": shuffled.groups == table.groups});
            }
            out
        }
        Command::Complement(t) => {
            let theta = build(t, policy)?;
            json!({
                "d": t.d,
                "spec": t.spec(),
                "satisfies_lambda": theta.satisfies_lambda(),
                "cohomology": complement_cohomology(&theta, &config)?,
                "homology": complement_homology(&theta, &config)?,
            })
        }
        Command::Euler(t) => {
            let theta = build(t, policy)?;
            json!({"spec": t.spec(), "euler": euler_number(&theta)})
        }
        Command::Stab { target, dprime } => {
            let report = stabilization_report(&target.spec(), target.d, *dprime, policy, &config)?;
            to_value(&report.verdict())
        }
        Command::Bouquet { d, k, q } => {
            let q = q.unwrap_or(d % 2);
            to_value(&bouquet_check(*d, *k, q, policy, &config)?.verdict())
        }
        Command::Theta { d, omega } => json!({
            "chain": theta_chain::<BigInt>(omega, *d, &config)?,
            "dual_class": theta_dual_class(omega, *d, &config)?,
        }),
        Command::Vassiliev { d, k } => {
            let zero = VassilievElement::zero(*d, *k)?;
            let top = zero.top_index();
            let mut products = Vec::new();
            for l in 0..=top {
                for m in 0..=top {
                    let p = vassiliev_mul(&VassilievElement::basis(*d, *k, l)?, &VassilievElement::basis(*d, *k, m)?)?;
                    products.push(json!({"l": l, "m": m, "product": p}));
                }
            }
            let degrees: Vec<Value> = (0..=top).map(|m| json!({"m": m, "degree": zero.degree_of(m)})).collect();
            let arnold = if k <= d { Some(arnold_crosscheck(*d, *k, &config)?) } else { None };
            json!({"d": d, "k": k, "top_index": top, "degrees": degrees, "products": products, "arnold": arnold})
        }
        Command::Verify { d } => to_value(&verify_complex(*d, policy)?),
        Command::Report { d } => {
            let verdicts = standard_report(*d, policy, &config)?;
            let pass = verdicts.iter().all(|v| v.pass);
            json!({"d": d, "pass": pass, "verdicts": verdicts})
        }
    })
}

/// The checks that apply at a single level `d`.
fn standard_report(d: u32, policy: ParityPolicy, config: &SnfConfig) -> Result<Vec<Verdict>, Error> {
    let mut out = Vec::new();
    let identities = verify_complex(d, policy)?;
    out.push(Verdict::new(
        "differential identities hold on the full complex",
        json!([d]),
        identities.all_pass(),
        to_value(&identities),
    ));
    for k in 1..d {
        for q in (d % 2..=d).step_by(2) {
            out.push(bouquet_check(d, k, q, policy, config)?.verdict());
        }
    }
    for k in 3..=5.min(d) {
        out.push(arnold_crosscheck(d, k, config)?);
    }
    let free = omega_core::build_poset(&PosetSpec::Family(Family::FreeGroupComplement), d, policy)?;
    let h = complement_homology(&free, config)?;
    let kappa = (d * (d - 2) / 4) as usize;
    let pass = h.rank(1) == kappa && h.groups.keys().all(|&j| j == 1) && h.group(1).is_free();
    out.push(Verdict::new(
        format!("free-group family complement has H_1 = Z^{kappa} and nothing else"),
        json!([d]),
        pass,
        json!({"homology": h, "kappa": kappa}),
    ));
    let families = [
        Family::Full,
        Family::FreeGroupComplement,
        Family::ReducedNormAtLeast { k: 1, q: 0 },
        Family::MaxEntryAtLeast { k: 2 },
    ];
    for f in families {
        let theta = omega_core::build_poset(&PosetSpec::Family(f), d, policy)?;
        out.push(uct_check(&theta, config)?);
    }
    let sub = sub_complex_homology(&omega_core::build_poset(&PosetSpec::Family(Family::Full), d, policy)?, config)?;
    out.push(Verdict::new(
        "full complex has the reduced homology of a d-sphere",
        json!([d]),
        sub.groups.len() == 1 && sub.rank(d as usize) == 1,
        to_value(&sub),
    ));
    Ok(out)
}

/// One invocation: the exit code and everything destined for stdout.
fn execute<I, T>(args: I) -> (u8, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let _ = e.print();
                    (1, String::new())
                }
            };
        }
    };
    let policy = ParityPolicy::from(cli.parity_policy);
    let request = cli.command.request(policy, cli.seed);
    let key = cache::key(&request);
    let store = cache::Cache::new(cache::resolve_dir(cli.cache_dir.as_deref()));
    let result = match store.get(&key) {
        Some(v) => v,
        None => match run(&cli.command, policy, cli.seed) {
            Ok(v) => {
                if let Err(e) = store.put(&key, &v) {
                    eprintln!("warning: could not write cache entry: {e}");
                }
                v
            }
            Err(e) => {
                eprintln!("error: {e}");
                return (if e.is_validation() { 1 } else { 2 }, String::new());
            }
        },
    };
    let envelope = json!({
        "schema": SCHEMA,
        "command": cli.command.name(),
        "parity_policy": policy,
        "result": result,
    });
    let text = if cli.json {
        serde_json::to_string_pretty(&envelope).expect("JSON output") + "\n"
    } else {
        render::render(cli.command.name(), &envelope["result"])
    };
    (0, text)
}

fn main() -> ExitCode {
    let (code, text) = execute(std::env::args_os());
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn omega(args: &[&str], cache: &Path) -> (u8, String) {
        let mut argv: Vec<OsString> = vec!["omega".into()];
        argv.extend(args.iter().map(OsString::from));
        argv.push("--cache-dir".into());
        argv.push(cache.into());
        execute(argv)
    }

    fn json_of(args: &[&str], cache: &Path) -> Value {
        let mut a = args.to_vec();
        a.push("--json");
        let (code, out) = omega(&a, cache);
        assert_eq!(code, 0, "{args:?}");
        serde_json::from_str(&out).unwrap()
    }

    fn entries(p: &Path) -> usize {
        std::fs::read_dir(p)
            .unwrap()
            .map(|e| {
                let path = e.unwrap().path();
                if path.is_dir() {
                    entries(&path)
                } else {
                    usize::from(path.extension().is_some_and(|x| x == "json"))
                }
            })
            .sum()
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        assert_eq!(omega(&["--help"], p).0, 0);
        assert_eq!(omega(&["nonsense"], p).0, 1);
        assert_eq!(omega(&["enumerate", "--d", "5"], p).0, 1);
        assert_eq!(omega(&["euler", "--d", "6", "--bogus"], p).0, 1);
        assert_eq!(omega(&["theta", "--d", "6", "--omega", "(1,2"], p).0, 1);
        assert_eq!(omega(&["enumerate", "--d", "4"], p).0, 0);
    }

    #[test]
    fn euler_example() {
        let dir = tempfile::tempdir().unwrap();
        let v = json_of(&["euler", "--d", "6", "--family", "reduced-norm-ge:4"], dir.path());
        assert_eq!(v["schema"], "omega/1");
        assert_eq!(v["result"]["euler"]["chi"], 4);
        assert_eq!(v["result"]["euler"]["a"], 4);
    }

    #[test]
    fn theta_json_has_three_terms() {
        let dir = tempfile::tempdir().unwrap();
        let v = json_of(&["theta", "--d", "6", "--omega", "(1,2,2,1)"], dir.path());
        let terms = v["result"]["chain"]["boundary"].as_array().unwrap();
        assert_eq!(terms.len(), 3);
        assert!(terms.iter().any(|t| t[0] == "(1,4,1)" && t[1] == -1));
    }

    #[test]
    fn verify_twelve() {
        let dir = tempfile::tempdir().unwrap();
        let v = json_of(&["verify", "--d", "12"], dir.path());
        assert_eq!(v["result"]["generators"], 2731);
        assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }

    #[test]
    fn generators_take_one_value() {
        let dir = tempfile::tempdir().unwrap();
        let v = json_of(&["poset", "--d", "6", "--generators", "(3,3);(1,2,2,1)"], dir.path());
        let members = v["result"]["members"].as_array().unwrap();
        assert!(members.contains(&json!("(6)")) && members.contains(&json!("(1,4,1)")));
    }

    #[test]
    fn warm_cache_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        for args in [
            &["homology", "--d", "6", "--family", "max-entry-ge:3"][..],
            &["bouquet", "--d", "6", "--k", "3", "--q", "0"],
            &["vassiliev", "--d", "8", "--k", "4", "--json"],
        ] {
            let cold = omega(args, dir.path());
            let warm = omega(args, dir.path());
            assert_eq!(cold.0, 0);
            assert_eq!(cold, warm);
        }
        assert_eq!(entries(dir.path()), 3);
    }

    #[test]
    fn seeded_reordering_agrees() {
        let dir = tempfile::tempdir().unwrap();
        let v = json_of(&["homology", "--d", "8", "--family", "reduced-norm-ge:3", "--seed", "11"], dir.path());
        assert_eq!(v["result"]["reorder_check"]["agrees"], true);
    }

    #[test]
    fn parity_policy_changes_the_key() {
        let dir = tempfile::tempdir().unwrap();
        let a = json_of(&["enumerate", "--d", "4"], dir.path());
        let b = json_of(&["enumerate", "--d", "4", "--parity-policy", "all"], dir.path());
        assert_ne!(a["result"]["count"], b["result"]["count"]);
        assert_eq!(b["parity_policy"], "all");
    }
}
