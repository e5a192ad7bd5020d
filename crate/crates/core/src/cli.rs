//! The `tropfan` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::complex::{
    cochain_complex, compact_cochain_complex, homology, star_bm_complex, star_row_complex, HomologyTable,
};
use crate::duality::{
    balance_defect, classify_dim1, euler_criteria, is_local_tpd, is_tpd, is_uniquely_balanced,
    local_tpd_characterization, star_tpd, tpd_from_stars_check, CriterionStatus, TpdReport,
};
use crate::fan::WeightedFan;
use crate::io::{read_fan, read_matroid, serialize_fan, star_document};
use crate::linalg::RingTag;
use crate::matroid::bergman_weighted;
use crate::sheaf::build_multicotangent;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "tropfan", version, about = "Tropical homology and Poincaré duality of weighted fans")]
struct Cli {
    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Worker threads for per-face computations.
    #[arg(long, global = true, env = "TROPFAN_THREADS", value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FanArgs {
    /// Fan document (JSON).
    #[arg(long, value_name = "PATH")]
    fan: PathBuf,
    /// Coefficient ring: Z, Q or Fp:<prime>. Overrides the document.
    #[arg(long, value_name = "R")]
    ring: Option<RingTag>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the balancing condition of the weights.
    Balance(FanArgs),
    /// Borel-Moore homology of F_p, for the fan or the star of a face.
    Homology {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_name = "ID")]
        face: Option<usize>,
    },
    /// Cohomology and compactly supported cohomology of F^p.
    Cohomology {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_name = "ID")]
        face: Option<usize>,
    },
    /// Tropical Poincaré duality of the fan or of the star of a face.
    Tpd {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, value_name = "ID")]
        face: Option<usize>,
    },
    /// Duality on every star, with the codimension-one characterization.
    LocalTpd(FanArgs),
    /// Euler characteristic criterion over a field.
    Euler {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Classification of one-dimensional fans.
    Dim1(FanArgs),
    /// Export the star of a face as a fan document.
    StarExport {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, value_name = "ID")]
        face: usize,
    },
    /// Bergman fan of a matroid, with weight 1.
    Bergman {
        #[arg(long, value_name = "PATH")]
        matroid: PathBuf,
        #[arg(long, value_name = "R", default_value = "Z")]
        ring: RingTag,
    },
    /// Cohomology of the complex of top star homologies.
    StarRow {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        p: Option<usize>,
    },
}

/// Result of a subcommand before rendering.
struct Outcome {
    command: &'static str,
    inputs: Value,
    results: Value,
    witnesses: Vec<String>,
    /// `None` for plain computations.
    verdict: Option<bool>,
    text: String,
}

impl Outcome {
    fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let report = json!({
                "command": self.command,
                "inputs": self.inputs,
                "results": self.results,
                "witnesses": self.witnesses,
                "verdict": self.verdict,
            });
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Parses `argv` (including the program name), runs the command, and writes
/// to `out` and `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((body, code)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, body).map_err(Error::from),
                None => out.write_all(body.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::StarExport { fan, face } => {
            let wf = load(fan)?;
            Ok((star_document(&wf, *face)?, 0))
        }
        Command::Bergman { matroid, ring } => {
            let m = read_matroid(matroid)?;
            Ok((serialize_fan(&bergman_weighted(&m, *ring)?)?, 0))
        }
        other => {
            let outcome = report(other)?;
            Ok((outcome.render(cli.json), outcome.exit_code()))
        }
    }
}

fn load(args: &FanArgs) -> Result<WeightedFan> {
    let wf = read_fan(&args.fan)?;
    match args.ring {
        Some(r) if r != wf.ring => wf.with_ring(r),
        _ => Ok(wf),
    }
}

fn inputs(args: &FanArgs, wf: &WeightedFan) -> Value {
    json!({ "fan": path_string(&args.fan), "ring": wf.ring.to_string() })
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn degrees(d: usize, p: Option<usize>) -> Result<Vec<usize>> {
    match p {
        Some(p) if p > d => Err(Error::OutOfRange(format!("degree {p} exceeds fan dimension {d}"))),
        Some(p) => Ok(vec![p]),
        None => Ok((0..=d).collect()),
    }
}

fn table_json(t: &HomologyTable) -> Value {
    Value::Array(
        t.degrees
            .iter()
            .zip(&t.groups)
            .map(|(q, g)| {
                json!({
                    "q": q,
                    "group": g.presentation.describe(t.ring),
                    "free_rank": g.presentation.free_rank,
                    "invariant_factors": g.presentation.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// "the fan" for the vertex, "the star of face 3 [0, 2]" otherwise.
fn region(wf: &WeightedFan, face: usize) -> String {
    if face == wf.fan.vertex() {
        "the fan".to_string()
    } else {
        format!("the star of face {}", face_label(wf, face))
    }
}

fn face_label(wf: &WeightedFan, face: usize) -> String {
    let f = wf.fan.face(face);
    if f.rays.is_empty() {
        "v".to_string()
    } else {
        format!("{face} {:?}", f.rays)
    }
}

fn report(command: &Command) -> Result<Outcome> {
    match command {
        Command::Balance(args) => balance(args),
        Command::Homology { fan, p, face } => homology_report(fan, *p, *face),
        Command::Cohomology { fan, p, face } => cohomology_report(fan, *p, *face),
        Command::Tpd { fan, face } => tpd_report(fan, *face),
        Command::LocalTpd(args) => local_tpd_report(args),
        Command::Euler { fan, p } => euler_report(fan, *p),
        Command::Dim1(args) => dim1_report(args),
        Command::StarRow { fan, p } => star_row_report(fan, *p),
        Command::StarExport { .. } | Command::Bergman { .. } => unreachable!("handled by execute"),
    }
}

fn balance(args: &FanArgs) -> Result<Outcome> {
    let wf = load(args)?;
    let defect = balance_defect(&wf)?;
    let unique = match defect {
        None => Some(is_uniquely_balanced(&wf)?),
        Some(_) => None,
    };
    let mut text = format!("ring {}\nbalanced: {}\n", wf.ring, defect.is_none());
    let mut witnesses = Vec::new();
    if let Some(f) = defect {
        let w = format!("boundary of the fundamental chain is nonzero at face {}", face_label(&wf, f));
        writeln!(text, "witness: {w}").ok();
        witnesses.push(w);
    }
    if let Some(u) = unique {
        writeln!(text, "uniquely balanced: {u}").ok();
    }
    Ok(Outcome {
        command: "balance",
        inputs: inputs(args, &wf),
        results: json!({ "balanced": defect.is_none(), "failing_face": defect, "uniquely_balanced": unique }),
        witnesses,
        verdict: Some(defect.is_none()),
        text,
    })
}

fn homology_report(args: &FanArgs, p: Option<usize>, face: Option<usize>) -> Result<Outcome> {
    let wf = load(args)?;
    let d = wf.fan.dim();
    let gamma = face.unwrap_or(wf.fan.vertex());
    let mut text = format!("Borel-Moore homology over {} on {}\n", wf.ring, region(&wf, gamma));
    let mut results = serde_json::Map::new();
    for p in degrees(d, p)? {
        let t = homology(&star_bm_complex(&wf.fan, gamma, p, wf.ring)?)?;
        for (q, g) in t.degrees.iter().zip(&t.groups) {
            writeln!(text, "  H_{q}(F_{p}) = {}", g.presentation.describe(wf.ring)).ok();
        }
        results.insert(p.to_string(), table_json(&t));
    }
    let mut inp = inputs(args, &wf);
    inp["face"] = json!(gamma);
    Ok(Outcome {
        command: "homology",
        inputs: inp,
        results: Value::Object(results),
        witnesses: Vec::new(),
        verdict: None,
        text,
    })
}

fn cohomology_report(args: &FanArgs, p: Option<usize>, face: Option<usize>) -> Result<Outcome> {
    let wf = load(args)?;
    let d = wf.fan.dim();
    let mut text = format!("cohomology over {}\n", wf.ring);
    let mut results = serde_json::Map::new();
    for p in degrees(d, p)? {
        let entry = match face {
            Some(g) => {
                wf.fan.check_id(g)?;
                let r = build_multicotangent(&wf.fan, p)?.rank(g);
                writeln!(text, "  H^0(Star {}, F^{p}) = rank {r}, higher groups vanish", face_label(&wf, g)).ok();
                json!({ "face": g, "degree0_rank": r })
            }
            None => {
                let h = homology(&cochain_complex(&wf.fan, p, wf.ring)?)?;
                let hc = homology(&compact_cochain_complex(&wf.fan, p, wf.ring)?)?;
                for (q, g) in h.degrees.iter().zip(&h.groups) {
                    writeln!(text, "  H^{q}(F^{p}) = {}", g.presentation.describe(wf.ring)).ok();
                }
                for (q, g) in hc.degrees.iter().zip(&hc.groups) {
                    writeln!(text, "  H_c^{q}(F^{p}) = {}", g.presentation.describe(wf.ring)).ok();
                }
                json!({ "cohomology": table_json(&h), "compact_support": table_json(&hc) })
            }
        };
        results.insert(p.to_string(), entry);
    }
    Ok(Outcome {
        command: "cohomology",
        inputs: inputs(args, &wf),
        results: Value::Object(results),
        witnesses: Vec::new(),
        verdict: None,
        text,
    })
}

fn tpd_text(wf: &WeightedFan, r: &TpdReport) -> String {
    let mut text = format!("duality on {} over {}, dimension {}\n", region(wf, r.face), r.ring, r.dim);
    writeln!(text, "  p  dim H^0(F^p)  rank H_d(F_(d-p))  cap iso").ok();
    for c in &r.caps {
        writeln!(
            text,
            "  {:<2} {:<13} {:<18} {}",
            c.p, r.cohomology_ranks[c.p], r.top_homology_ranks[c.p], c.isomorphism
        )
        .ok();
    }
    for v in r.vanishing.iter().filter(|v| !v.vanishes) {
        writeln!(text, "  H_{}(F_{}) = {} does not vanish", v.q, v.p, v.group).ok();
    }
    writeln!(text, "TPD: {}", r.verdict).ok();
    text
}

fn tpd_report(args: &FanArgs, face: Option<usize>) -> Result<Outcome> {
    let wf = load(args)?;
    let r = match face {
        Some(g) => star_tpd(&wf, g)?,
        None => is_tpd(&wf)?,
    };
    let mut inp = inputs(args, &wf);
    inp["face"] = json!(r.face);
    Ok(Outcome {
        command: "tpd",
        inputs: inp,
        results: serde_json::to_value(&r).expect("report serializes"),
        witnesses: r.first_failure().into_iter().collect(),
        verdict: Some(r.verdict),
        text: tpd_text(&wf, &r),
    })
}

fn local_tpd_report(args: &FanArgs) -> Result<Outcome> {
    let wf = load(args)?;
    let local = is_local_tpd(&wf)?;
    let characterization = local_tpd_characterization(&wf)?;
    let stars = if wf.fan.dim() >= 2 { Some(tpd_from_stars_check(&wf)?) } else { None };
    let mut text = format!("local duality over {}\n", wf.ring);
    for r in &local.faces {
        writeln!(text, "  face {:<16} {}", face_label(&wf, r.face), r.verdict).ok();
    }
    writeln!(text, "all stars vanish outside the top degree: {}", characterization.all_stars_vanish).ok();
    writeln!(text, "codimension-one stars satisfy duality: {}", characterization.codim1_stars_tpd).ok();
    if let Some(g) = &characterization.geometric {
        writeln!(
            text,
            "unit weights: {}, codimension-one stars uniquely balanced: {}",
            g.unit_weights, g.codim1_stars_uniquely_balanced
        )
        .ok();
    }
    writeln!(text, "local TPD: {}", local.verdict).ok();
    let witnesses = local
        .faces
        .iter()
        .filter_map(|r| r.first_failure().map(|w| format!("face {}: {w}", face_label(&wf, r.face))))
        .take(1)
        .collect();
    Ok(Outcome {
        command: "local-tpd",
        inputs: inputs(args, &wf),
        results: json!({
            "verdict": local.verdict,
            "first_failing_face": local.first_failing_face,
            "faces": local.faces.iter().map(|r| json!({"face": r.face, "verdict": r.verdict})).collect::<Vec<_>>(),
            "characterization": characterization,
            "stars_theorem": stars,
        }),
        witnesses,
        verdict: Some(local.verdict),
        text,
    })
}

fn euler_report(args: &FanArgs, p: Option<usize>) -> Result<Outcome> {
    let wf = load(args)?;
    let all = euler_criteria(&wf)?;
    let chosen: Vec<_> = degrees(wf.fan.dim(), p)?.into_iter().map(|p| all[p].clone()).collect();
    let mut text = format!("Euler criterion over {}\n  p  (-1)^d chi  dim F^p(v)  status\n", wf.ring);
    for r in &chosen {
        writeln!(text, "  {:<2} {:<11} {:<11} {:?}", r.p, r.signed_euler_characteristic, r.cohomology_dim, r.status)
            .ok();
    }
    let verdict = chosen.iter().all(|r| r.status == CriterionStatus::Holds);
    let witnesses = chosen
        .iter()
        .filter(|r| r.status != CriterionStatus::Holds)
        .map(|r| format!("p = {}: {} vs {} ({:?})", r.p, r.signed_euler_characteristic, r.cohomology_dim, r.status))
        .collect();
    Ok(Outcome {
        command: "euler",
        inputs: inputs(args, &wf),
        results: serde_json::to_value(&chosen).expect("report serializes"),
        witnesses,
        verdict: Some(verdict),
        text,
    })
}

fn dim1_report(args: &FanArgs) -> Result<Outcome> {
    let wf = load(args)?;
    let r = classify_dim1(&wf)?;
    let text = format!(
        "one-dimensional fan over {}\n  uniquely balanced: {}\n  unit weights: {}\nTPD: {}\n",
        wf.ring, r.uniquely_balanced, r.unit_weights, r.verdict
    );
    let mut witnesses = Vec::new();
    if !r.uniquely_balanced {
        witnesses.push("the fundamental class does not generate the top Borel-Moore group".to_string());
    }
    if !r.unit_weights {
        witnesses.push("some weight is not a unit".to_string());
    }
    Ok(Outcome {
        command: "dim1",
        inputs: inputs(args, &wf),
        results: serde_json::to_value(&r).expect("report serializes"),
        witnesses,
        verdict: Some(r.verdict),
        text,
    })
}

fn star_row_report(args: &FanArgs, p: Option<usize>) -> Result<Outcome> {
    let wf = load(args)?;
    let d = wf.fan.dim();
    let mut text = format!("star row complexes over {}\n", wf.ring);
    let mut results = serde_json::Map::new();
    let mut exact = true;
    let mut witnesses = Vec::new();
    for p in degrees(d, p)? {
        let c = star_row_complex(&wf.fan, p, wf.ring)?;
        let t = homology(&c)?;
        for (r, g) in t.degrees.iter().zip(&t.groups) {
            writeln!(
                text,
                "  p = {p}, position {r}: rank {}, cohomology {}",
                c.rank_at(*r),
                g.presentation.describe(wf.ring)
            )
            .ok();
            if *r < d && !g.presentation.is_zero() {
                exact = false;
                witnesses.push(format!("p = {p}: cohomology {} at position {r}", g.presentation.describe(wf.ring)));
            }
        }
        results.insert(p.to_string(), json!({ "ranks": c.ranks, "cohomology": table_json(&t) }));
    }
    writeln!(text, "exact except in the rightmost position: {exact}").ok();
    Ok(Outcome {
        command: "star-row",
        inputs: inputs(args, &wf),
        results: Value::Object(results),
        witnesses,
        verdict: Some(exact),
        text,
    })
}
