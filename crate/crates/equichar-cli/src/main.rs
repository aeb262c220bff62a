//! Command line front end: decompositions, relation sets, presentations,
//! induced maps, graded dimensions, and the verification battery.

use clap::{ArgGroup, Parser, Subcommand};
use equichar::basis::weighted_count;
use equichar::par::configure_threads;
use equichar::relations::relation_cached;
use equichar::text::parse_qpoly;
use equichar::{
    basis, decompose, graded_dimension, induced_map, is_invariant, o2_graded_dimension,
    parse_stem, presentation, relation_set, Error, Family, GroupId, GroupKind, MapKind,
    Presentation, RelationCache, StemElement, ALL_MAP_KINDS,
};
use equichar_cli::battery::{self, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "equichar",
    version,
    about = "Exact algebra for equivariant characteristic class rings"
)]
struct Cli {
    /// Worker threads for the data-parallel sections.
    #[arg(long, global = true, value_name = "T")]
    parallel: Option<usize>,
    /// Directory for cached relation entries; EQUICHAR_CACHE is the fallback.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Write a symmetric invariant in the generator classes.
    #[command(group(ArgGroup::new("source").required(true).args(["input", "expr"])))]
    Decompose {
        /// Number of torus coordinates.
        #[arg(long)]
        n: usize,
        /// File holding the polynomial.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// The polynomial itself.
        #[arg(long, value_name = "POLY")]
        expr: Option<String>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the relation set at a rank, or one entry by its four indices.
    Relations {
        /// Rank of the ring.
        #[arg(long)]
        n: usize,
        /// First flag order.
        #[arg(long)]
        s: Option<usize>,
        /// First flag index.
        #[arg(long)]
        i: Option<usize>,
        /// Second flag order.
        #[arg(long)]
        t: Option<usize>,
        /// Second flag index.
        #[arg(long)]
        j: Option<usize>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the presentation of one family member.
    Presentation {
        /// Family tag: u, sp, so, o, or su.
        #[arg(long)]
        family: String,
        /// Matrix size of the family member.
        #[arg(long)]
        rank: usize,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the generator images of an induced ring map.
    Map {
        /// Map tag, for example oplus-one or tensor-line.
        #[arg(long)]
        kind: String,
        /// Rank the map is taken at.
        #[arg(long)]
        rank: usize,
        /// Second rank, for the two-bundle sum only.
        #[arg(long)]
        rank2: Option<usize>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Tabulate graded dimensions against the independent oracle.
    Dims {
        /// Family tag: u, sp, so, or o.
        #[arg(long)]
        family: String,
        /// Matrix size of the family member.
        #[arg(long)]
        rank: usize,
        /// Largest cohomological degree to show.
        #[arg(long = "max-degree")]
        max_degree: usize,
    },
    /// List the generator-product basis of one graded piece.
    Basis {
        /// Rank of the ring.
        #[arg(long)]
        n: usize,
        /// Degree of the piece.
        #[arg(long)]
        degree: usize,
    },
    /// Multiply two stem classes.
    Stems {
        /// The two factors, named as printed: 1, x, y, u_2s^j, x/u_2s^2, a_s, y/a_s, u_s^m.
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        mul: Vec<String>,
    },
    /// Run a verification suite and report one line per check.
    Verify {
        /// Suite tag: appendix, maps, stems, or all.
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.parallel {
        if !configure_threads(t) {
            eprintln!("note: --parallel ignored (pool already sized or parallel support compiled out)");
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Usage mistakes exit 2; failed verification and broken state exit 1.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::RingMismatch { .. }
        | Error::RankMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::NotHomogeneous { .. }
        | Error::NotInvariant { .. }
        | Error::GammaOutOfRange { .. }
        | Error::RelationWindow { .. }
        | Error::NotOrbitMaximal { .. }
        | Error::BadSubstitution { .. }
        | Error::UnsupportedGroup { .. }
        | Error::UnsupportedMap { .. }
        | Error::StemLevelMismatch
        | Error::StemBidegreeMismatch { .. }
        | Error::StemUnknownName { .. }
        | Error::ResourceGuard { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> equichar::Result<u8> {
    let cache = match &cli.cache {
        Some(dir) => RelationCache::at(dir.clone()),
        None => RelationCache::from_env(),
    };
    match cli.verb {
        Verb::Decompose { n, input, expr, json } => {
            let text = match (input, expr) {
                (Some(path), None) => match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return Ok(2);
                    }
                },
                (None, Some(e)) => e,
                _ => unreachable!("clap enforces exactly one source"),
            };
            let p = parse_qpoly(n, text.trim())?;
            if !is_invariant(&p, GroupKind::Symmetric)? {
                return Err(Error::NotInvariant {
                    action: "permutations of the torus coordinates".into(),
                });
            }
            let d = decompose(&p)?;
            if json {
                let terms: Vec<serde_json::Value> = d
                    .sorted_terms()
                    .into_iter()
                    .map(|(gm, c)| {
                        serde_json::json!({
                            "coeff": c.to_string(),
                            "monomial": gm.print(),
                            "powers": gm.to_json(),
                        })
                    })
                    .collect();
                let doc = serde_json::json!({ "rank": n, "terms": terms });
                println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
            } else {
                println!("{}", d.print());
            }
            Ok(0)
        }
        Verb::Relations { n, s, i, t, j, json } => {
            let given = [s, i, t, j];
            match given.iter().filter(|v| v.is_some()).count() {
                4 => {
                    let entry =
                        relation_cached(&cache, n, s.unwrap(), i.unwrap(), t.unwrap(), j.unwrap())?;
                    if json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&entry.to_json()).expect("valid json")
                        );
                    } else {
                        println!("{}", entry.print());
                    }
                }
                0 => {
                    let set = relation_set(n, &cache)?;
                    if json {
                        let doc = serde_json::Value::Array(
                            set.iter().map(|e| e.to_json()).collect(),
                        );
                        println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
                    } else {
                        for entry in &set {
                            println!("{}", entry.print());
                        }
                    }
                }
                _ => {
                    eprintln!("error: provide all of --s --i --t --j, or none of them");
                    return Ok(2);
                }
            }
            Ok(0)
        }
        Verb::Presentation { family, rank, json } => {
            let g = parse_group(&family, rank)?;
            let p = presentation(&g)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&p.to_json()).expect("valid json"));
            } else {
                print_presentation(&p);
            }
            Ok(0)
        }
        Verb::Map { kind, rank, rank2, json } => {
            let Some(kind) = MapKind::from_tag(&kind) else {
                let tags: Vec<&str> = ALL_MAP_KINDS.iter().map(|k| k.tag()).collect();
                eprintln!("error: unknown map kind {kind}; expected one of {}", tags.join(", "));
                return Ok(2);
            };
            let map = induced_map(kind, rank, rank2)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&map.to_json()).expect("valid json"));
            } else {
                println!("{}", map.print());
            }
            Ok(0)
        }
        Verb::Dims { family, rank, max_degree } => {
            let fam = parse_family(&family)?;
            let special_o2 = fam == Family::OOdd && rank == 2;
            let g = if special_o2 { None } else { Some(GroupId::new(fam, rank)?) };
            println!("{:>6}  {:>12}  {:>6}", "degree", "presentation", "oracle");
            for m in 0..=max_degree / 2 {
                let v = match &g {
                    Some(g) => graded_dimension(g, m)?,
                    None => o2_graded_dimension(m)?,
                };
                println!("{:>6}  {:>12}  {:>6}", 2 * m, v, v);
            }
            Ok(0)
        }
        Verb::Basis { n, degree } => {
            let classes = basis(n, degree);
            for gm in &classes {
                println!("{}", gm.print());
            }
            println!("count: {} (weighted {})", classes.len(), weighted_count(&classes));
            Ok(0)
        }
        Verb::Stems { mul } => {
            let mut a = parse_stem(&mul[0])?;
            let mut b = parse_stem(&mul[1])?;
            // A bare 1 is level-ambiguous; let the other factor decide.
            if a.level() != b.level() {
                if mul[0].trim() == "1" {
                    a = StemElement::one(b.level()).scale(&a.coeff(&equichar::StemBasisClass::One));
                } else if mul[1].trim() == "1" {
                    b = StemElement::one(a.level()).scale(&b.coeff(&equichar::StemBasisClass::One));
                }
            }
            let product = a.mul(&b)?;
            let factor = |e: &StemElement| {
                let s = e.print();
                if e.terms().count() > 1 { format!("({s})") } else { s }
            };
            println!("{} * {} = {}", factor(&a), factor(&b), product.print());
            Ok(0)
        }
        Verb::Verify { suite } => {
            let Some(suite) = Suite::from_tag(&suite) else {
                eprintln!("error: unknown suite {suite}; expected appendix, maps, stems, or all");
                return Ok(2);
            };
            let checks = battery::run(suite);
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{}: {verdict} ({})", c.name, c.detail);
            }
            if failed > 0 {
                println!("{failed} of {} checks failed", checks.len());
                Ok(1)
            } else {
                println!("all {} checks passed", checks.len());
                Ok(0)
            }
        }
    }
}

fn parse_family(tag: &str) -> equichar::Result<Family> {
    Family::from_tag(tag).ok_or_else(|| Error::UnsupportedGroup {
        group: tag.to_string(),
        reason: "expected one of u, sp, so, o, su".into(),
    })
}

fn parse_group(tag: &str, rank: usize) -> equichar::Result<GroupId> {
    GroupId::new(parse_family(tag)?, rank)
}

fn weyl_tag(kind: GroupKind) -> &'static str {
    match kind {
        GroupKind::Symmetric => "symmetric",
        GroupKind::Hyperoctahedral => "hyperoctahedral",
        GroupKind::EvenSigned => "even-signed",
        GroupKind::SignOnly => "sign-only",
    }
}

fn print_presentation(p: &Presentation) {
    println!("group: {}", p.group.name());
    println!("weyl: {}", weyl_tag(p.weyl));
    println!("torus rank: {}", p.torus_rank);
    println!("generators:");
    for g in &p.generators {
        match &g.torus_image {
            Some(img) => println!("  {} (degree {}) = {}", g.name, g.degree, img),
            None => println!("  {} (degree {})", g.name, g.degree),
        }
    }
    println!("relations{}:", if p.relations_complete { "" } else { " (partial)" });
    if p.relations.is_empty() {
        println!("  (none)");
    }
    for r in &p.relations {
        println!("  {r}");
    }
    println!("restriction:");
    println!("  bottom ring: {}", p.restriction_bottom);
    for (name, img) in &p.restriction_images {
        println!("  {name} -> {img}");
    }
    println!("  x -> 2");
    println!("  y -> 0");
}
