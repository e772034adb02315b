//! The `sp4lab` command line.
//!
//! Exit codes: 0 success, 2 when a checked inequality or identity is refuted,
//! 1 for usage and input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::atlas::Atlas;
use crate::chain::{full_chain, Subgroup};
use crate::congruence::{subdirect_count, verify_kernel_generation, LevelSplit, SpanMode};
use crate::error::{Error, Result};
use crate::io::{read_subgroup, Format, Report};
use crate::modular::check_modulus;
use crate::perm::Perm;
use crate::quartic::{self, IntMatrix};
use crate::ramification::{bound_check_with, sweep, verify_identities, Family, RamificationReport};
use crate::rational;
use crate::symplectic::{sp4_order, GroupElement};
use crate::toric::{census, ToricSingularity};

#[derive(Debug, Parser, Serialize)]
#[command(name = "sp4lab", version, about = "Exact computations for Sp(4, Z/n) and its boundary strata")]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Level n (1..=255).
    #[arg(long, global = true)]
    pub level: Option<i64>,
    /// Subgroup JSON file.
    #[arg(long, global = true)]
    pub subgroup: Option<PathBuf>,
    /// Seed for randomized runs (required by every randomized command).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    #[serde(skip)]
    pub format: Format,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Orbit-point ceiling for subgroup closures.
    #[arg(long, global = true)]
    pub ceiling: Option<usize>,
    /// Adjoin -1 to the loaded subgroup.
    #[arg(long, global = true)]
    pub adjoin_center: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Enumerate a family of boundary strata.
    Atlas {
        #[arg(long, value_enum)]
        family: AtlasFamily,
        #[arg(long, conflicts_with = "dump")]
        count: bool,
        #[arg(long)]
        dump: bool,
    },
    /// Ramification report of a subgroup.
    RamReport,
    /// Index bounds for a subgroup, or for `--random K` seeded random subgroups at `--level`.
    BoundCheck {
        /// D, E, DD, F or DDD; repeatable, all five when omitted.
        #[arg(long, value_parser = parse_family)]
        family: Vec<Family>,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Randomized checks of the matrix identities behind the bounds.
    VerifyIdentities {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Abelian quotient singularities of affine 3-space.
    Toric {
        #[command(subcommand)]
        op: ToricOp,
    },
    /// The Igusa quartic: points, stabilizers, fixed loci, involutions.
    Quartic {
        #[command(subcommand)]
        op: QuarticOp,
    },
    /// CRT splitting, p-projections and kernel layers.
    Congruence {
        #[command(subcommand)]
        op: CongruenceOp,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum AtlasFamily {
    #[value(name = "D")]
    D,
    #[value(name = "cusp")]
    #[serde(rename = "cusp")]
    Cusp,
    #[value(name = "E")]
    E,
    #[value(name = "F")]
    F,
    #[value(name = "line")]
    #[serde(rename = "line")]
    Line,
    #[value(name = "triple")]
    #[serde(rename = "triple")]
    Triple,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToricOp {
    /// δ and the multiplicity bound; modulus from `--modulus` or `--p --s`.
    Delta {
        #[arg(long)]
        modulus: Option<u32>,
        /// Generators "a,b,c;d,e,f".
        #[arg(long)]
        weights: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
    },
    /// Exact multiplicity (modulus at most 32).
    Mult {
        #[arg(long)]
        modulus: u32,
        #[arg(long)]
        weights: String,
    },
    /// Cyclic actions mod p^s with δ >= ε, against the census bound.
    Census {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        epsilon: String,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuarticOp {
    /// Membership and smoothness of a point.
    On {
        #[arg(long)]
        point: String,
        /// Conductor m of the working field Q(ζ_m).
        #[arg(long, default_value_t = quartic::DEFAULT_CONDUCTOR)]
        field: u32,
    },
    /// Stabilizer in S6 with tangent determinants and ages.
    Stab {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = quartic::DEFAULT_CONDUCTOR)]
        field: u32,
    },
    /// Fixed locus of a permutation; every listed type when omitted.
    Classify {
        #[arg(long)]
        perm: Option<String>,
    },
    /// Integral basis conjugating an involution to φ0; `--random` uses a seeded Γ(1)-conjugate.
    NormalForm {
        /// Sixteen integers, row-major.
        #[arg(long, required_unless_present = "random")]
        matrix: Option<String>,
        #[arg(long)]
        random: bool,
        /// Refuse the degenerate gcd case.
        #[arg(long)]
        strict: bool,
    },
    /// Relations of the (i,i) stabilizer.
    Relations,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CongruenceOp {
    /// Split an element of level n = m p^t; random (seeded) without `--matrix`.
    Split {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Image of `--subgroup` in the p-part.
    Pproj {
        #[arg(long)]
        p: u32,
    },
    /// Span of the conjugates of h^{p^{i-1}} in the layer K_{i-1}/K_i.
    KernelGen {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, value_enum, default_value = "sampled")]
        mode: SpanMode,
    },
    /// Subgroups of A x B projecting onto both factors (`--subgroup` is A).
    Subdirect {
        #[arg(long)]
        other: PathBuf,
    },
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Rendered output and whether it records a refutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub refuted: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.refuted {
            2
        } else {
            0
        }
    }
}

/// Parses arguments and runs; returns the exit code and what was written to
/// stdout and stderr.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return if code == 0 { (0, e.to_string(), String::new()) } else { (1, String::new(), e.to_string()) };
        }
    };
    match run(&cli) {
        Ok(o) => (o.exit_code(), o.output, String::new()),
        Err(e) => (1, String::new(), format!("error: {e}\n")),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match cli.global.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

fn config(cli: &Cli) -> BTreeMap<String, Value> {
    match serde_json::to_value(cli) {
        Ok(Value::Object(m)) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => BTreeMap::new(),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Atlas { .. } => "atlas",
        Command::RamReport => "ram-report",
        Command::BoundCheck { .. } => "bound-check",
        Command::VerifyIdentities { .. } => "verify-identities",
        Command::Toric { .. } => "toric",
        Command::Quartic { .. } => "quartic",
        Command::Congruence { .. } => "congruence",
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let (result, refuted) = execute(cli)?;
    let mut report = Report::new(command_name(&cli.command), config(cli), result);
    if cli.global.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    Ok(Outcome { output: report.render(cli.global.format)?, refuted })
}

fn level(g: &GlobalArgs) -> Result<u32> {
    let n = g.level.ok_or_else(|| Error::InvalidInput("--level is required".into()))?;
    check_modulus(n)
}

fn seed(g: &GlobalArgs) -> Result<u64> {
    g.seed.ok_or_else(|| Error::InvalidInput("--seed is required for randomized runs".into()))
}

fn subgroup(g: &GlobalArgs) -> Result<Subgroup> {
    let path = g.subgroup.as_ref().ok_or_else(|| Error::InvalidInput("--subgroup is required".into()))?;
    let mut h = read_subgroup(path, g.adjoin_center)?;
    if let Some(c) = g.ceiling {
        h = h.with_ceiling(c);
    }
    if let Some(n) = g.level {
        if n != h.level() as i64 {
            return Err(Error::ModulusMismatch(check_modulus(n)?, h.level()));
        }
    }
    Ok(h)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn execute(cli: &Cli) -> Result<(Value, bool)> {
    let g = &cli.global;
    match &cli.command {
        Command::Atlas { family, dump, .. } => atlas(level(g)?, *family, *dump).map(|v| (v, false)),
        Command::RamReport => {
            let h = subgroup(g)?;
            let atlas = Atlas::new(h.level())?;
            Ok((to_value(&RamificationReport::compute(&h, &atlas)?), false))
        }
        Command::BoundCheck { family, random } => {
            let families: Vec<Family> = if family.is_empty() { Family::ALL.to_vec() } else { family.clone() };
            match random {
                Some(k) => {
                    let mut r = sweep(&[level(g)?], *k, seed(g)?)?;
                    for e in &mut r.entries {
                        e.verdicts.retain(|v| families.contains(&v.family));
                    }
                    r.refutations = r.entries.iter().flat_map(|e| &e.verdicts).filter(|v| !v.satisfied).count();
                    let refuted = r.refutations > 0;
                    Ok((to_value(&r), refuted))
                }
                None => {
                    let h = subgroup(g)?;
                    let report = RamificationReport::compute(&h, &Atlas::new(h.level())?)?;
                    let verdicts =
                        families.iter().map(|&f| bound_check_with(&report, f)).collect::<Result<Vec<_>>>()?;
                    let refuted = verdicts.iter().any(|v| !v.satisfied);
                    Ok((to_value(&verdicts), refuted))
                }
            }
        }
        Command::VerifyIdentities { trials } => {
            let r = verify_identities(level(g)?, *trials, seed(g)?)?;
            Ok((to_value(&r), !r.holds()))
        }
        Command::Toric { op } => toric(op),
        Command::Quartic { op } => quartic_cmd(g, op),
        Command::Congruence { op } => congruence(g, op),
    }
}

fn atlas(n: u32, family: AtlasFamily, dump: bool) -> Result<Value> {
    let atlas = Atlas::new(n)?;
    let vs = |v: &crate::symplectic::Vector4| v.to_string();
    let plane = |p: &crate::atlas::Plane| p.basis().iter().map(vs).collect::<Vec<_>>();
    let items: Vec<Value> = match family {
        AtlasFamily::D => atlas.divisors_d().iter().map(|d| json!({ "vector": vs(&d.vector()) })).collect(),
        AtlasFamily::Cusp => {
            atlas.cusps().iter().map(|c| json!({ "plane": plane(&c.plane()), "form": c.form_value() })).collect()
        }
        AtlasFamily::E => atlas
            .e_divisors()
            .iter()
            .map(|e| {
                let (a, b) = e.planes();
                json!({ "w1": plane(&a), "w2": plane(&b) })
            })
            .collect(),
        AtlasFamily::F => {
            atlas.f_divisors().iter().map(|f| json!({ "involution": f.involution().rep().to_string() })).collect()
        }
        AtlasFamily::Line => atlas
            .lines()
            .iter()
            .map(|l| {
                let (a, b) = l.divisors();
                json!({ "d1": vs(&a.vector()), "d2": vs(&b.vector()), "cusp": plane(&l.cusp().plane()) })
            })
            .collect(),
        AtlasFamily::Triple => atlas
            .triples()
            .iter()
            .map(|t| json!({ "divisors": t.divisors().iter().map(|d| vs(&d.vector())).collect::<Vec<_>>() }))
            .collect(),
    };
    let mut out = json!({ "level": n, "family": family, "count": items.len() });
    if dump {
        let indexed: Vec<Value> = items
            .into_iter()
            .enumerate()
            .map(|(i, mut v)| {
                let mut m = serde_json::Map::from_iter([("index".to_string(), json!(i))]);
                m.append(v.as_object_mut().expect("record"));
                Value::Object(m)
            })
            .collect();
        out["items"] = Value::Array(indexed);
    }
    Ok(out)
}

fn parse_weights(s: &str) -> Result<Vec<[i64; 3]>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<i64> = t
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad weight {x:?} in {t:?}"))))
                .collect::<Result<_>>()?;
            <[i64; 3]>::try_from(v).map_err(|_| Error::Parse(format!("weight {t:?} needs three entries")))
        })
        .collect()
}

fn toric_summary(h: &ToricSingularity) -> Value {
    json!({
        "modulus": h.modulus(),
        "generators": h.weights(),
        "order": h.order(),
        "min_invariant_degree": h.min_invariant_degree(),
        "delta": rational::to_string(&h.delta()),
        "mult_upper_bound": rational::to_string(&h.mult_upper_bound()),
    })
}

fn toric(op: &ToricOp) -> Result<(Value, bool)> {
    match op {
        ToricOp::Delta { modulus, weights, p, s } => {
            let n = match (modulus, p, s) {
                (Some(n), None, None) => *n,
                (None, Some(p), Some(s)) => {
                    if !crate::modular::is_prime(*p as u64) {
                        return Err(Error::NotPrime(*p as u64));
                    }
                    p.checked_pow(*s).ok_or_else(|| Error::CapExceeded(format!("{p}^{s}")))?
                }
                _ => return Err(Error::InvalidInput("give either --modulus or both --p and --s".into())),
            };
            let h = ToricSingularity::new(n, &parse_weights(weights)?)?;
            Ok((toric_summary(&h), false))
        }
        ToricOp::Mult { modulus, weights } => {
            let h = ToricSingularity::new(*modulus, &parse_weights(weights)?)?;
            let m = h.mult_exact()?;
            let mut v = toric_summary(&h);
            v["mult_exact"] = json!(m);
            let within = num_rational::Rational64::from_integer(m as i64) <= h.mult_upper_bound();
            v["within_bound"] = json!(within);
            Ok((v, !within))
        }
        ToricOp::Census { p, s, epsilon } => {
            let c = census(*p, *s, rational::parse(epsilon)?)?;
            let v = json!({
                "p": c.p,
                "s": c.s,
                "epsilon": rational::to_string(&c.epsilon),
                "count": c.count,
                "bound": c.bound.to_string(),
                "satisfied": c.satisfied,
            });
            Ok((v, !c.satisfied))
        }
    }
}

fn parse_matrix(s: &str) -> Result<[i64; 16]> {
    let v: Vec<i64> = s
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace() || c == '[' || c == ']')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad matrix entry {t:?}"))))
        .collect::<Result<_>>()?;
    <[i64; 16]>::try_from(v).map_err(|v| Error::Parse(format!("matrix needs 16 entries, got {}", v.len())))
}

fn int_matrix(e: &[i64; 16]) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| e[4 * i + j]))
}

fn quartic_cmd(g: &GlobalArgs, op: &QuarticOp) -> Result<(Value, bool)> {
    match op {
        QuarticOp::On { point, field } => {
            let x = quartic::parse_point(point, *field)?;
            let on = quartic::on_quartic(&x);
            let singular = if on { Some(quartic::is_singular(&x)?) } else { None };
            Ok((json!({ "point": x, "field": field, "on_quartic": on, "singular": singular }), false))
        }
        QuarticOp::Stab { point, field } => {
            let x = quartic::parse_point(point, *field)?;
            let stab = quartic::stabilizer(&x)?;
            let smooth = quartic::on_quartic(&x) && !quartic::is_singular(&x)?;
            let elements: Vec<Value> = stab
                .iter()
                .map(|s| {
                    let mut v = json!({ "sigma": s.sigma.to_string(), "lambda": s.lambda });
                    if smooth {
                        let det = quartic::tangent_action_determinant(&x, s)?;
                        let w = quartic::tangent_weights(&x, s)?;
                        let pairs: Vec<(u32, u32)> = w.weights.iter().map(|&a| (a, w.order)).collect();
                        v["tangent_determinant"] = json!(det);
                        v["tangent_order"] = json!(w.order);
                        v["tangent_weights"] = json!(w.weights);
                        v["min_age"] = json!(quartic::min_age(&pairs).map(|a| rational::to_string(&a)));
                        v["reid_tai"] = json!(quartic::reid_tai(&pairs));
                    }
                    Ok(v)
                })
                .collect::<Result<_>>()?;
            Ok((json!({ "point": x, "smooth_on_quartic": smooth, "order": stab.len(), "elements": elements }), false))
        }
        QuarticOp::Classify { perm } => {
            let perms = match perm {
                Some(p) => vec![Perm::parse_cycles(6, p)?],
                None => quartic::listed_representatives(),
            };
            let reports = perms.iter().map(quartic::classify_permutation_fixed_locus).collect::<Result<Vec<_>>>()?;
            Ok((to_value(&reports), false))
        }
        QuarticOp::NormalForm { matrix, random, strict } => {
            let m = match matrix {
                Some(s) => int_matrix(&parse_matrix(s)?),
                None => {
                    debug_assert!(*random);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed(g)?);
                    let c = quartic::random_gamma1(&mut rng, 12);
                    quartic::int_mul(
                        &quartic::int_mul(&c, &quartic::phi0_int())?,
                        &quartic::int_symplectic_inverse(&c),
                    )?
                }
            };
            let nf = if *strict {
                quartic::involution_normal_form_strict(&m)?
            } else {
                quartic::involution_normal_form(&m)?
            };
            Ok((json!({ "input": m, "normal_form": nf }), false))
        }
        QuarticOp::Relations => {
            let r = quartic::stab_ii_relations();
            let holds = r.holds();
            Ok((to_value(&r), !holds))
        }
    }
}

fn congruence(g: &GlobalArgs, op: &CongruenceOp) -> Result<(Value, bool)> {
    match op {
        CongruenceOp::Split { p, matrix } => {
            let n = level(g)?;
            let s = LevelSplit::new(n, *p)?;
            let x = match matrix {
                Some(m) => GroupElement::from_flat(&parse_matrix(m)?, n)?,
                None => full_chain(n).random_element(&mut ChaCha8Rng::seed_from_u64(seed(g)?)),
            };
            let (a, b) = s.split(&x)?;
            let back = s.combine(&a, &b)?;
            let (oa, ob) = s.component_orders();
            let v = json!({
                "split": s,
                "element": x.to_string(),
                "component_m": a.to_string(),
                "component_q": b.to_string(),
                "order_m": oa.to_string(),
                "order_q": ob.to_string(),
                "order_n": sp4_order(n).to_string(),
                "round_trip": back == x,
            });
            Ok((v, back != x))
        }
        CongruenceOp::Pproj { p } => {
            let h = subgroup(g)?;
            let s = LevelSplit::new(h.level(), *p)?;
            let hp = s.p_projection(&h)?;
            let gens: Vec<String> = hp.generators().iter().map(|x| x.to_string()).collect();
            let v = json!({
                "split": s,
                "order": h.order()?.to_string(),
                "projection_order": hp.order()?.to_string(),
                "projection_index": hp.index_in(&Subgroup::full(s.q))?.to_string(),
                "projection_generators": gens,
            });
            Ok((v, false))
        }
        CongruenceOp::KernelGen { p, i, mode } => {
            let seed = match mode {
                SpanMode::Sampled => seed(g)?,
                SpanMode::Closure => g.seed.unwrap_or(0),
            };
            let r = verify_kernel_generation(*p, *i, *mode, seed)?;
            let refuted = !r.generated || r.power_failures > 0;
            Ok((to_value(&r), refuted))
        }
        CongruenceOp::Subdirect { other } => {
            let a = subgroup(g)?;
            let b = read_subgroup(other, g.adjoin_center)?;
            Ok((to_value(&subdirect_count(&a, &b)?), false))
        }
    }
}
