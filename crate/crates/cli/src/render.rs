//! Plain-text tables drawn from the JSON results, so cached and fresh runs
//! print the same thing.

use std::fmt::Write;

use serde_json::Value;

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(ToString::to_string).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, out: &mut String) {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String], out: &mut String| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&self.header, out);
        line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(), out);
        for r in &self.rows {
            line(r, out);
        }
    }
}

/// `Z^2 + Z/3` from `{"rank": 2, "torsion": [3]}`.
fn group(v: &Value) -> String {
    let rank = v["rank"].as_u64().unwrap_or(0);
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for t in v["torsion"].as_array().into_iter().flatten() {
        parts.push(format!("Z/{}", plain(t)));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Scalars without JSON quoting.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn chain(v: &Value) -> String {
    let terms: Vec<String> = v
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| {
            let c = plain(&t[1]);
            let (sign, mag) = c.strip_prefix('-').map_or(("+", c.as_str()), |m| ("-", m));
            let mag = if mag == "1" { "" } else { mag };
            format!("{sign}{mag}{}", plain(&t[0]))
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

fn homology_table(title: &str, table: &Value, out: &mut String) {
    let mut t = Table::new(&["degree", title]);
    for g in table["groups"].as_array().into_iter().flatten() {
        t.row(vec![plain(&g["degree"]), group(g)]);
    }
    if t.rows.is_empty() {
        t.row(vec!["*".into(), "0".into()]);
    }
    t.render(out);
}

fn kv(out: &mut String, pairs: &[(&str, String)]) {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in pairs {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
}

fn verdict_line(v: &Value) -> String {
    format!("{}  {}", if v["pass"] == Value::Bool(true) { "PASS" } else { "FAIL" }, plain(&v["claim"]))
}

pub fn render(command: &str, r: &Value) -> String {
    let mut out = String::new();
    match command {
        "enumerate" => {
            let mut t = Table::new(&["pattern", "norm", "reduced", "degree"]);
            for p in r["patterns"].as_array().into_iter().flatten() {
                t.row(vec![plain(&p["pattern"]), plain(&p["norm"]), plain(&p["reduced_norm"]), plain(&p["degree"])]);
            }
            t.render(&mut out);
            let _ = writeln!(out, "{} patterns at d = {}", r["count"], r["d"]);
        }
        "poset" => {
            let list = |v: &Value| v.as_array().into_iter().flatten().map(plain).collect::<Vec<_>>().join(" ");
            kv(
                &mut out,
                &[
                    ("d", plain(&r["d"])),
                    ("members", r["members"].as_array().map_or(0, Vec::len).to_string()),
                    ("maximal", list(&r["maximal_elements"])),
                    ("lambda", plain(&r["satisfies_lambda"])),
                    ("profinite", plain(&r["profinite"])),
                    ("min |w|'", plain(&r["codimension"]["min_reduced_norm"])),
                    ("max |w|' (maximal)", plain(&r["codimension"]["max_reduced_norm_maximal"])),
                    ("max |w|'", plain(&r["codimension"]["max_reduced_norm"])),
                    ("eta", plain(&r["stability"]["eta"])),
                    ("psi", plain(&r["stability"]["psi"])),
                    ("xi", plain(&r["stability"]["xi"])),
                ],
            );
            let _ = writeln!(out, "\n{}", list(&r["members"]));
        }
        "complex" => {
            for which in ["sub", "quotient"] {
                let c = &r[which];
                let mut t = Table::new(&["degree", "rank", "boundary nnz"]);
                for (n, basis) in c["degrees"].as_object().into_iter().flatten() {
                    let nnz = c["boundaries"][n].as_array().map_or(0, Vec::len);
                    t.row(vec![n.clone(), basis.as_array().map_or(0, Vec::len).to_string(), nnz.to_string()]);
                }
                let _ = writeln!(out, "{which} complex  sha256 {}", plain(&r[format!("{which}_fingerprint")]));
                t.render(&mut out);
                out.push('\n');
            }
        }
        "homology" => {
            homology_table("H_n", &r["homology"], &mut out);
            if let Some(check) = r.get("reorder_check") {
                let _ = writeln!(out, "reordered bases (seed {}): agrees = {}", check["seed"], check["agrees"]);
            }
        }
        "complement" => {
            let mut t = Table::new(&["j", "H~^j", "H~_j"]);
            let find = |table: &Value, j: u64| {
                table["groups"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .find(|g| g["degree"].as_u64() == Some(j))
                    .map_or("0".into(), group)
            };
            for j in 0..=r["d"].as_u64().unwrap_or(0) {
                t.row(vec![j.to_string(), find(&r["cohomology"], j), find(&r["homology"], j)]);
            }
            t.render(&mut out);
        }
        "euler" => {
            let e = &r["euler"];
            kv(
                &mut out,
                &[
                    ("chi", plain(&e["chi"])),
                    ("A", plain(&e["a"])),
                    ("chi(compactification)", plain(&e["compactification_chi"])),
                ],
            );
            let mut t = Table::new(&["degree", "cells"]);
            for (n, c) in e["census"].as_object().into_iter().flatten() {
                t.row(vec![n.clone(), plain(c)]);
            }
            out.push('\n');
            t.render(&mut out);
        }
        "stab" => {
            let _ = writeln!(out, "{}", verdict_line(r));
            for s in r["details"]["steps"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "\nd = {} -> {}  psi = {}  complement j <= {}  compactification j >= {}",
                    s["from"], s["to"], plain(&s["quantities"]["psi"]), plain(&s["complement_bound"]), plain(&s["compactification_bound"])
                );
                let mut t = Table::new(&["kind", "j", "lower", "upper", "in range", "agree"]);
                for kind in ["complement", "compactification"] {
                    for c in s[kind].as_array().into_iter().flatten() {
                        t.row(vec![
                            kind.into(),
                            plain(&c["degree"]),
                            group(&c["lower"]),
                            group(&c["upper"]),
                            plain(&c["in_range"]),
                            plain(&c["agree"]),
                        ]);
                    }
                }
                t.render(&mut out);
            }
        }
        "bouquet" => {
            let d = &r["details"];
            let _ = writeln!(out, "{}", verdict_line(r));
            let mut pairs = vec![
                ("census chi", plain(&d["euler"]["chi"])),
                ("A", plain(&d["euler"]["a"])),
                ("rank in degree d-k", plain(&d["rank"])),
                ("free", plain(&d["free"])),
                ("concentrated", plain(&d["concentrated"])),
                ("chi, all parities", plain(&d["all_parity_chi"])),
            ];
            if let Some(p) = d.get("published_count") {
                pairs.push(("published count", plain(p)));
                pairs.push(("matches published", plain(&d["published_count_matches"])));
            }
            kv(&mut out, &pairs);
            out.push('\n');
            homology_table("H_n", &d["homology"], &mut out);
        }
        "theta" => {
            let c = &r["chain"];
            let dual = &r["dual_class"];
            kv(
                &mut out,
                &[
                    ("omega", plain(&c["omega"])),
                    ("boundary", chain(&c["boundary"])),
                    ("cycle degree", plain(&c["witness_class_degree"])),
                    ("cycle", plain(&c["is_cycle"])),
                    ("boundary of generator", plain(&c["is_boundary_of_generator"])),
                    ("class order", plain(&c["class"])),
                    ("dual degree", plain(&dual["degree"])),
                    ("dual cycle", plain(&dual["is_cycle"])),
                    ("dual class order", plain(&dual["class"])),
                ],
            );
        }
        "vassiliev" => {
            let mut t = Table::new(&["l", "m", "e_l * e_m"]);
            for p in r["products"].as_array().into_iter().flatten() {
                let terms: Vec<String> = p["product"]["coeffs"]
                    .as_object()
                    .into_iter()
                    .flatten()
                    .map(|(m, c)| if plain(c) == "1" { format!("e_{m}") } else { format!("{}*e_{m}", plain(c)) })
                    .collect();
                let shown = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                t.row(vec![plain(&p["l"]), plain(&p["m"]), shown]);
            }
            t.render(&mut out);
            if !r["arnold"].is_null() {
                let _ = writeln!(out, "\n{}", verdict_line(&r["arnold"]));
            }
        }
        "verify" => {
            let mut t = Table::new(&["identity", "pass", "first violator"]);
            for c in r["checks"].as_array().into_iter().flatten() {
                let witness = c["witness"].as_array().map_or("-".into(), |w| format!("{} -> {}", plain(&w[0]), plain(&w[1])));
                t.row(vec![plain(&c["identity"]), plain(&c["pass"]), witness]);
            }
            t.render(&mut out);
            let _ = writeln!(out, "{} generators at d = {}", r["generators"], r["d"]);
        }
        "report" => {
            for v in r["verdicts"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{}", verdict_line(v));
            }
        }
        _ => {
            let _ = writeln!(out, "{r:#}");
        }
    }
    out
}
