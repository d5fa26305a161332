//! Command-line front end: per-word criterion battery, cover experiments,
//! Baumslag-Solitar and Heegaard verifications, and a bounded-length census.
//!
//! Exit code 0 means the command ran; certification status lives in the
//! payload, never in the exit code.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use surfdouble::census;
use surfdouble::covers::{self, CoverGraph};
use surfdouble::words::{parse_word, phi_for_rank2, PhiMap, Word};
use surfdouble::{bsgroups, heegaard, report};

#[derive(Parser)]
#[command(name = "surfdouble", version, about = "Surface-subgroup criteria for doubles of free groups along a word")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole criterion battery on one word
    Analyze {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate words up to a length bound modulo symmetry and tabulate
    /// which criteria fire (CSV)
    Census {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long = "max-len")]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology of a finite cover and the induced double
    Cover {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Cyclic cover index (uses the canonical rank-2 epimorphism, or
        /// --phi for higher rank)
        #[arg(long)]
        k: Option<u64>,
        /// Permutation cover: one cycle-notation permutation per generator,
        /// separated by semicolons, e.g. "(1 2 3);(1 2)"
        #[arg(long)]
        perm: Option<String>,
        /// Comma-separated integer values of the epimorphism per generator
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Baumslag-Solitar subgroup verification: the gcd-subgroup largeness
    /// witness, or the circle-subgroup Betti census for coprime exponents
    BsVerify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long = "l-max", default_value_t = 6)]
        l_max: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify the Heegaard diagram of a Baumslag-Solitar word
    HeegaardVerify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        json: bool,
        /// Write the plain-text edge/slot listing here
        #[arg(long)]
        text: Option<PathBuf>,
        /// Write an SVG schematic here
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(&path, content)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            word,
            rank,
            json,
            out,
        } => {
            let report = report::analyze(&word, rank)?;
            if json {
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
            } else {
                emit(out, &render_report(&report))?;
            }
        }
        Command::Census { rank, max_len, out } => {
            const MAX_LEN_BOUND: usize = 14;
            if max_len > MAX_LEN_BOUND {
                bail!("--max-len is capped at {MAX_LEN_BOUND}");
            }
            let reps = census::class_representatives(rank, max_len);
            let mut rows = reps
                .par_iter()
                .map(|w| census::census_row(w))
                .collect::<Result<Vec<_>, _>>()?;
            census::sort_rows(&mut rows);
            emit(out, &census::rows_to_csv(&rows))?;
        }
        Command::Cover {
            word,
            rank,
            k,
            perm,
            phi,
            json,
            out,
        } => {
            let w = parse_word(&word, rank)?;
            let cover = build_cover(&w, rank, k, perm.as_deref(), phi.as_deref())?;
            let payload = cover_report(&cover, &w)?;
            if json {
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            } else {
                emit(out, &render_cover(&payload))?;
            }
        }
        Command::BsVerify {
            p,
            q,
            l_max,
            json,
            out,
        } => {
            let payload = bs_report(p, q, l_max)?;
            if json {
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            } else {
                emit(out, &render_bs(&payload))?;
            }
        }
        Command::HeegaardVerify {
            p,
            q,
            json,
            text,
            svg,
            out,
        } => {
            let diagram = heegaard::build_diagram(p, q)?;
            let verification = heegaard::verify_diagram(&diagram, p, q)?;
            if let Some(path) = text {
                std::fs::write(&path, heegaard::diagram_to_text(&diagram))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = svg {
                std::fs::write(&path, heegaard::diagram_to_svg(&diagram))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let payload = json!({
                "p": p,
                "q": q,
                "discs": diagram.disc_labels.len(),
                "arcs": diagram.arcs.len(),
                "verification": verification,
                "passed": verification.passed(),
            });
            if json {
                emit(out, &format!("{}\n", serde_json::to_string_pretty(&payload)?))?;
            } else {
                let mut s = format!(
                    "Heegaard diagram for BS({p},{q}): {} discs, {} arcs\n",
                    diagram.disc_labels.len(),
                    diagram.arcs.len()
                );
                s.push_str(&format!(
                    "  single curve: {} ({} cycle(s))\n  order-reversing gluings: {}\n  ribbon planarity: {} (closed surface Euler characteristic {}, genus {})\n  word check: {}\n  verdict: {}\n",
                    verification.single_curve,
                    verification.curve_cycles,
                    verification.order_reversing,
                    verification.ribbon_planar,
                    verification.closed_surface_euler,
                    verification.genus,
                    verification.word_matches,
                    if verification.passed() { "PASS" } else { "FAIL" },
                ));
                for f in &verification.failures {
                    s.push_str(&format!("  failure: {f}\n"));
                }
                emit(out, &s)?;
            }
        }
    }
    Ok(())
}

fn render_report(r: &report::CriterionReport) -> String {
    let mut s = format!("word {} in the free group of rank {}\n", r.word, r.rank);
    s.push_str(&format!(
        "  proper power: {}{}\n  in commutator subgroup: {}\n  double is one-ended: {}\n",
        r.flags.proper_power,
        r.flags
            .proper_power_root
            .as_ref()
            .map(|root| format!(
                " (root {}, exponent {})",
                root,
                r.flags.proper_power_exponent.unwrap_or(0)
            ))
            .unwrap_or_default(),
        r.flags.in_commutator_subgroup,
        r.flags.one_ended,
    ));
    for c in &r.criteria {
        let status = if !c.applicable {
            "inapplicable"
        } else if c.fired {
            "FIRED"
        } else {
            "no"
        };
        s.push_str(&format!("  criterion {:<24} {}\n", c.name, status));
        for note in &c.notes {
            s.push_str(&format!("    - {note}\n"));
        }
    }
    s.push_str(&format!("  verdict: {}\n", r.summary));
    s
}

fn parse_phi(text: &str, rank: usize) -> Result<PhiMap> {
    let values: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .context("parsing --phi values")?;
    if values.len() != rank {
        bail!("--phi needs {rank} comma-separated integers");
    }
    Ok(PhiMap::new(values)?)
}

/// Parses one-line cycle notation like "(1 2 3)(4 5)" on points 1..=d;
/// "id" or "()" is the identity.
fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    if text == "id" || text == "()" {
        return Ok(Vec::new());
    }
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            bail!("cycle notation must look like (1 2 3)(4 5), got {text:?}");
        }
        let close = rest.find(')').context("unclosed cycle")?;
        let inner = &rest[1..close];
        let points: Vec<usize> = inner
            .split([' ', ','])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .context("cycle entries must be positive integers")?;
        if points.iter().any(|&p| p == 0) {
            bail!("cycle points are 1-based");
        }
        cycles.push(points);
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn build_cover(
    w: &Word,
    rank: usize,
    k: Option<u64>,
    perm: Option<&str>,
    phi: Option<&str>,
) -> Result<CoverGraph> {
    match (k, perm) {
        (Some(k), None) => {
            let phi = match phi {
                Some(text) => parse_phi(text, rank)?,
                None if rank == 2 && !surfdouble::words::is_in_commutator_subgroup(w) => {
                    phi_for_rank2(w)?
                }
                // commutator words vanish under every integral character, so
                // any primitive choice works
                None => report::orthogonal_primitive(&surfdouble::words::exponent_vector(w))
                    .context("no admissible epimorphism for this rank; pass --phi")?,
            };
            Ok(CoverGraph::cyclic(rank, &phi, k)?)
        }
        (None, Some(perm)) => {
            let specs: Vec<&str> = perm.split(';').collect();
            if specs.len() != rank {
                bail!("--perm needs {rank} semicolon-separated permutations");
            }
            let parsed: Vec<Vec<Vec<usize>>> = specs
                .iter()
                .map(|s| parse_cycles(s))
                .collect::<Result<_>>()?;
            let degree = parsed
                .iter()
                .flatten()
                .flatten()
                .copied()
                .max()
                .unwrap_or(1);
            let perms: Vec<Vec<usize>> = parsed
                .iter()
                .map(|cycles| {
                    let mut p: Vec<usize> = (0..degree).collect();
                    for cycle in cycles {
                        for pair in cycle.windows(2) {
                            p[pair[0] - 1] = pair[1] - 1;
                        }
                        if cycle.len() > 1 {
                            p[cycle[cycle.len() - 1] - 1] = cycle[0] - 1;
                        }
                    }
                    p
                })
                .collect();
            Ok(CoverGraph::from_perms(rank, perms, 0)?)
        }
        _ => bail!("exactly one of --k or --perm selects the cover"),
    }
}

fn cover_report(cover: &CoverGraph, w: &Word) -> Result<serde_json::Value> {
    let (beta1, torsion) = covers::homology_one_relator_cover(cover, w)?;
    let beta2 = covers::betti2_double(cover, w)?;
    let pullback = covers::is_relator_trivial(cover, w);
    let n = cover.rank() as i64;
    let k = cover.degree() as i64;
    let expected = beta1 as i64 + k * (2 - n) - 1;
    Ok(json!({
        "word": w.to_string(),
        "rank": cover.rank(),
        "index": cover.degree(),
        "beta1_cover": beta1,
        "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "beta2_double": beta2,
        "relator_acts_trivially": pullback,
        "euler_identity": if pullback {
            json!({"beta2": beta2, "beta1_plus_k(2-n)_minus_1": expected, "holds": beta2 as i64 == expected})
        } else {
            json!({"holds": serde_json::Value::Null, "note": "the relator permutes the fiber nontrivially, so the cover is not pulled back from the one-relator quotient and the identity does not apply"})
        },
    }))
}

fn render_cover(v: &serde_json::Value) -> String {
    let torsion = v["torsion"]
        .as_array()
        .map(|a| {
            a.iter()
                .map(|t| t.as_str().unwrap_or("?").to_string())
                .collect::<Vec<_>>()
                .join(", ")
        })
        .unwrap_or_default();
    let mut s = format!(
        "cover of index {} for word {}\n  beta_1 of the one-relator cover complex: {}\n  torsion: [{}]\n  beta_2 of the double: {}\n",
        v["index"],
        v["word"].as_str().unwrap_or(""),
        v["beta1_cover"],
        torsion,
        v["beta2_double"],
    );
    if v["relator_acts_trivially"].as_bool() == Some(true) {
        let e = &v["euler_identity"];
        s.push_str(&format!(
            "  Euler identity beta_2 = beta_1 + k(2-n) - 1: {} = {} -> {}\n",
            e["beta2"],
            e["beta1_plus_k(2-n)_minus_1"],
            if e["holds"].as_bool() == Some(true) { "holds" } else { "VIOLATED" },
        ));
    } else {
        s.push_str("  Euler identity: not applicable (relator acts nontrivially on the fiber)\n");
    }
    s
}

fn bs_report(p: u64, q: u64, l_max: u64) -> Result<serde_json::Value> {
    let g = num_gcd(p, q);
    if g > 1 {
        let (pres, witness) = bsgroups::bs_gcd_subgroup(p, q)?;
        let verified = witness.verify(&pres);
        Ok(json!({
            "kind": "gcd_subgroup",
            "p": p,
            "q": q,
            "gcd": g,
            "presentation": pres.display(),
            "free_quotient_rank": witness.free_rank,
            "witness_verified": verified,
            "conclusion": format!("BS({p},{q}) is large: the index-{g} subgroup surjects a free group of rank {g}"),
        }))
    } else {
        let report = bsgroups::verify_edjvet_pride(p, q, l_max)?;
        Ok(json!({
            "kind": "circle_subgroups",
            "p": p,
            "q": q,
            "rows": report.rows,
            "all_beta1_one": report.all_beta1_one,
            "all_orders_match": report.all_orders_match,
            "conclusion": format!("every tested finite-index circle subgroup of BS({p},{q}) has first Betti number 1"),
        }))
    }
}

fn render_bs(v: &serde_json::Value) -> String {
    if v["kind"] == "gcd_subgroup" {
        format!(
            "BS({}, {}) with gcd {}\n  subgroup presentation: {}\n  killing the first generator maps onto a free group of rank {} (verified: {})\n  {}\n",
            v["p"], v["q"], v["gcd"], v["presentation"].as_str().unwrap_or(""), v["free_quotient_rank"], v["witness_verified"], v["conclusion"].as_str().unwrap_or(""),
        )
    } else {
        let mut s = format!(
            "BS({}, {}) coprime: circle subgroups\n  l  beta1  torsion_order  |p^l - q^l|\n",
            v["p"], v["q"]
        );
        for row in v["rows"].as_array().unwrap_or(&Vec::new()) {
            s.push_str(&format!(
                "  {:<2} {:<6} {:<14} {}\n",
                row["l"], row["beta1"], row["torsion_order"].as_str().unwrap_or(""), row["expected_order"].as_str().unwrap_or(""),
            ));
        }
        s.push_str(&format!(
            "  all beta1 = 1: {}; torsion orders match: {}\n",
            v["all_beta1_one"], v["all_orders_match"]
        ));
        s
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}
