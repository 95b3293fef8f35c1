//! Command-line front end for `rankforge`.
//!
//! Every command produces a JSON document (exact rationals as `"num/den"`
//! strings) and, where a table is natural, a CSV rendering. Exit codes: 0
//! computed, 1 negative result, 2 input error, 3 budget refusal.

pub mod named;
pub mod suite;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rankforge::affine::{AffineEquations, AffineFunctional};
use rankforge::analytic::{
    analytic_rank, bias, count_points_char_sum, count_points_direct, gowers_norm, gowers_norm_direct, rat_string,
    value_distribution, ExactMagnitude, GowersNorm,
};
use rankforge::ctx::{Ctx, DEFAULT_BUDGET};
use rankforge::error::{Error, Result};
use rankforge::explicit::{
    admissible_filter, check_admissible_field, explicit_extension, mu_bias, nc_rank_growth_check, stratify_ys,
    TorusT,
};
use rankforge::geometry::{
    census_yz_on, enumerate_points, enumerate_subspaces_in, kappa_fibers, universality_check, VarietyPoints,
};
use rankforge::gf::{Fe, PrimeField};
use rankforge::io::{family_to_json, function_to_json, parse_family, parse_function, parse_poly, poly_to_json};
use rankforge::nullsatz::{ideal_membership, rough_bound_check, vanishing_vs_ideal_dims, Membership};
use rankforge::poly::{MultiPoly, PolyFamily};
use rankforge::rank::{
    nc_rank, partition_rank, prank_lower_bound_from_bias, schmidt_rank, RankCertificate, RankResult,
};
use rankforge::weakpoly::{
    extend_by_slices, extend_by_solve, is_weakly_polynomial, star_check, weak_space, Extension, FunctionOnX,
};

#[derive(Parser, Debug)]
#[command(name = "rankforge", version, about = "Exact ranks, Gowers norms and variety geometry over small prime fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field size for named constructors; checked against JSON input.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Largest enumeration cost accepted before refusing [default: 1e8, suite 1e10].
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Xn,
    #[value(name = "paper-counterexample", alias = "counterexample")]
    Counterexample,
    Char2Quartic,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Polynomial or family in JSON, or `@path` to read it from a file.
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long, value_enum)]
    pub named: Option<Named>,
    /// Block size `d` for `--named xn`.
    #[arg(long = "xd", default_value_t = 2)]
    pub xd: usize,
    /// Number of blocks for `xn`, or variables for `char2-quartic`.
    #[arg(long = "xn")]
    pub xn: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FunctionInput {
    /// Values on the variety, `{"values": [...]}` in point order, or `@path`.
    #[arg(long)]
    pub values: Option<String>,
    /// Restriction of this polynomial (JSON or `@path`).
    #[arg(long)]
    pub fpoly: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// |E e_q(P)| exactly.
    Bias(Input),
    /// Gowers U_d norm of e_q(P).
    Gowers {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        d: Option<usize>,
        /// Use the defining average instead of the multilinear-form histogram.
        #[arg(long)]
        direct: bool,
    },
    /// Analytic rank.
    Arank {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Value distribution of a family and its uniformity defect.
    Equidist(Input),
    /// Points with P̄ = b̄, by characters and by enumeration.
    Count {
        #[command(flatten)]
        input: Input,
        /// Comma-separated target values (default all zero).
        #[arg(long)]
        b: Option<String>,
    },
    /// Schmidt rank.
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
    },
    /// Partition rank of the multilinear form of P, with the bias bound.
    Prank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
    },
    /// Schmidt rank of the multilinear form of P.
    Ncrank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        rmax: u32,
    },
    /// Points of the variety.
    Points {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        list: bool,
    },
    /// Affine m-spaces inside the variety.
    Subspaces {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Z and Y counts for a hyperplane W.
    Census {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// `c_1,…,c_n,b` for W = {Σ c_i x_i = b}; default x_1 = 0.
        #[arg(long)]
        hyperplane: Option<String>,
    },
    /// Fibers of φ ↦ P̄∘φ over affine maps k^m → k^n.
    Kappa {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        homogeneous: bool,
    },
    /// Whether every target is attained.
    Universal {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        limit: usize,
    },
    /// Is f weakly polynomial of degree <= a on X?
    Weaktest {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        function: FunctionInput,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Compare weakly polynomial functions with restrictions of polynomials.
    Star {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        a: u32,
    },
    /// Extend f to a polynomial of degree <= a on the ambient space.
    Extend {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        function: FunctionInput,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Coefficients of a linear form l; extend slice by slice along l.
        #[arg(long)]
        slices: Option<String>,
    },
    /// The explicit family X_n.
    Xn {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[command(subcommand)]
        action: XnAction,
    },
    /// Degree-capped ideal membership and vanishing dimensions.
    Nullsatz {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        cap: u32,
        /// Polynomial to test for membership (JSON or `@path`).
        #[arg(long)]
        r: Option<String>,
    },
    /// Run the acceptance criteria.
    Suite {
        #[arg(default_value = "acceptance")]
        name: String,
        /// Criterion names or numbers, comma separated.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum XnAction {
    /// |E e(μ)| for μ = x^1⋯x^d.
    Bias,
    /// Bias of the multilinear form against t^n.
    Growth {
        #[arg(long, default_value = "1,2")]
        ns: String,
    },
    /// Sizes of the strata Y_s.
    Strata,
    /// Characters of T and their admissibility.
    Characters,
    /// Star check at degree a.
    Star,
    /// Character-pipeline extension of a basis of weakly polynomial functions.
    Extend,
}

pub struct Report {
    pub doc: Value,
    pub table: Option<Table>,
    /// A property or feasibility check came out negative.
    pub negative: bool,
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    fn new(doc: Value) -> Self {
        Report {
            doc,
            table: None,
            negative: false,
        }
    }

    fn negative(mut self, neg: bool) -> Self {
        self.negative = neg;
        self
    }

    fn table(mut self, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.doc).expect("json") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                match &self.table {
                    Some(t) => {
                        w.write_record(&t.headers).expect("csv");
                        for r in &t.rows {
                            w.write_record(r).expect("csv");
                        }
                    }
                    None => {
                        w.write_record(["key", "value"]).expect("csv");
                        if let Value::Object(m) = &self.doc {
                            for (k, v) in m {
                                let s = match v {
                                    Value::String(s) => s.clone(),
                                    other => other.to_string(),
                                };
                                w.write_record([k.as_str(), s.as_str()]).expect("csv");
                            }
                        }
                    }
                }
                String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
            }
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Verification(_) | Error::Infeasible(_) => 1,
        _ => 2,
    }
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn check_q(g: &Global, field: PrimeField) -> Result<()> {
    match g.q {
        Some(q) if q != field.p() as u64 => Err(Error::InvalidInput(format!(
            "--q {q} disagrees with the input field {}",
            field.p()
        ))),
        _ => Ok(()),
    }
}

fn load_family(g: &Global, input: &Input) -> Result<PolyFamily> {
    let fam = match (&input.poly, input.named) {
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --poly or --named".into())),
        (Some(s), None) => parse_family(&read_arg(s)?)?,
        (None, Some(Named::Xn)) => {
            let q = g.q.ok_or_else(|| Error::InvalidInput("--named xn needs --q".into()))?;
            named::xn(input.xd, input.xn.unwrap_or(2), q)?.family()
        }
        (None, Some(Named::Counterexample)) => PolyFamily::single(named::counterexample_poly()),
        (None, Some(Named::Char2Quartic)) => PolyFamily::single(named::char2_quartic(input.xn.unwrap_or(5))),
        (None, None) => return Err(Error::InvalidInput("no input: use --poly or --named".into())),
    };
    check_q(g, fam.field())?;
    Ok(fam)
}

fn load_poly(g: &Global, input: &Input) -> Result<MultiPoly> {
    let fam = load_family(g, input)?;
    if fam.len() != 1 {
        return Err(Error::InvalidInput(format!("expected one polynomial, got {}", fam.len())));
    }
    Ok(fam.polys()[0].clone())
}

fn load_function(input: &Input, f: &FunctionInput, x: &VarietyPoints) -> Result<FunctionOnX> {
    match (&f.values, &f.fpoly) {
        (Some(_), Some(_)) => Err(Error::InvalidInput("give either --values or --fpoly".into())),
        (Some(v), None) => parse_function(&read_arg(v)?, x.field(), x.len()),
        (None, Some(p)) => {
            let p = parse_poly(&read_arg(p)?)?;
            if p.nvars() != x.ambient_dim() || p.field() != x.field() {
                return Err(Error::InvalidInput("function polynomial does not match the variety".into()));
            }
            Ok(FunctionOnX::from_poly(x, &p))
        }
        (None, None) if input.named == Some(Named::Counterexample) => Ok(named::counterexample_function(x)),
        (None, None) => Err(Error::InvalidInput("no function: use --values or --fpoly".into())),
    }
}

fn parse_list(s: &str, field: PrimeField) -> Result<Vec<Fe>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map(|v| field.elem(v))
                .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
        })
        .collect()
}

fn opt_rat(r: &Option<num_rational::BigRational>) -> Value {
    r.as_ref().map(|v| Value::String(rat_string(v))).unwrap_or(Value::Null)
}

fn magnitude_doc(m: &ExactMagnitude) -> Value {
    json!({
        "counts": m.histogram.counts,
        "magnitude_num_den": opt_rat(&m.magnitude),
        "magnitude_squared": opt_rat(&m.magnitude_squared),
        "float": m.float,
    })
}

fn gowers_doc(g: &GowersNorm) -> Value {
    json!({
        "d": g.d,
        "counts": g.histogram.counts,
        "norm_power": opt_rat(&g.power),
        "norm": opt_rat(&g.norm),
        "float": g.float,
    })
}

fn point_str(p: &[Fe]) -> String {
    p.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
}

fn certificate_doc(c: &Option<RankCertificate>) -> Value {
    match c {
        None => Value::Null,
        Some(RankCertificate::Decomposition(terms)) => Value::Array(
            terms
                .iter()
                .map(|t| json!({"q": poly_to_json(&t.q), "r": poly_to_json(&t.r), "blocks": t.blocks}))
                .collect(),
        ),
        Some(RankCertificate::LowerBound { bound, provenance }) => json!({"lower_bound": bound, "provenance": provenance}),
    }
}

fn rank_doc(r: &RankResult) -> Value {
    json!({
        "value": r.value.to_string(),
        "certificate": certificate_doc(&r.certificate),
        "log": r.log,
    })
}

fn subspace_rows(subs: &[rankforge::affine::AffineSubspace]) -> Vec<Vec<String>> {
    subs.iter()
        .map(|s| {
            vec![
                point_str(s.base()),
                s.basis().iter().map(|b| point_str(b)).collect::<Vec<_>>().join(" | "),
            ]
        })
        .collect()
}

pub fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let default = if matches!(cli.command, Command::Suite { .. }) { suite::SUITE_BUDGET } else { DEFAULT_BUDGET };
    let ctx = Ctx::new(g.budget.unwrap_or(default), g.workers);
    match &cli.command {
        Command::Bias(input) => {
            let p = load_poly(g, input)?;
            Ok(Report::new(magnitude_doc(&bias(&p, &ctx)?)))
        }
        Command::Gowers { input, d, direct } => {
            let p = load_poly(g, input)?;
            let d = d.unwrap_or(p.degree() as usize);
            let n = if *direct { gowers_norm_direct(&p, d, &ctx)? } else { gowers_norm(&p, d, &ctx)? };
            Ok(Report::new(gowers_doc(&n)))
        }
        Command::Arank { input, d } => {
            let p = load_poly(g, input)?;
            let d = d.unwrap_or(p.degree() as usize);
            let a = analytic_rank(&p, d, &ctx)?;
            Ok(Report::new(json!({"exact": opt_rat(&a.exact), "float": a.float, "norm": gowers_doc(&a.norm)})))
        }
        Command::Equidist(input) => {
            let fam = load_family(g, input)?;
            let v = value_distribution(&fam, &ctx)?;
            let q = fam.field().p() as u64;
            let rows = v
                .counts
                .iter()
                .enumerate()
                .map(|(code, c)| vec![point_str(&rankforge::poly::decode(code as u64, fam.len(), q)), c.to_string()])
                .collect();
            Ok(Report::new(json!({"counts": v.counts, "epsilon": rat_string(&v.epsilon), "float": v.epsilon_float}))
                .table(&["b", "count"], rows))
        }
        Command::Count { input, b } => {
            let fam = load_family(g, input)?;
            let b = match b {
                Some(s) => parse_list(s, fam.field())?,
                None => vec![Fe::ZERO; fam.len()],
            };
            if b.len() != fam.len() {
                return Err(Error::DimensionMismatch {
                    expected: fam.len(),
                    got: b.len(),
                });
            }
            let chars = count_points_char_sum(&fam, &b, &ctx)?;
            let direct = count_points_direct(&fam, &b, &ctx)?;
            if chars != direct {
                return Err(Error::Verification(format!("character sum {chars} vs enumeration {direct}")));
            }
            Ok(Report::new(json!({"count": direct, "character_sum": chars})))
        }
        Command::Rank { input, rmax } => {
            let p = load_poly(g, input)?;
            Ok(Report::new(rank_doc(&schmidt_rank(&p, *rmax, &ctx)?)))
        }
        Command::Prank { input, rmax } => {
            let p = load_poly(g, input)?;
            let t = p.multilinear_form()?;
            let pr = partition_rank(&t, *rmax, &ctx)?;
            let bb = prank_lower_bound_from_bias(&t, &ctx)?;
            Ok(Report::new(json!({"partition_rank": rank_doc(&pr), "bias": rat_string(&bb.bias), "bias_lower_bound": bb.bound})))
        }
        Command::Ncrank { input, rmax } => {
            let p = load_poly(g, input)?;
            let r = nc_rank(&p, *rmax, &ctx)?;
            Ok(Report::new(json!({
                "exact": r.exact.as_ref().map(rank_doc),
                "upper_bound": r.upper_bound.as_ref().map(|(b, c)| json!({"bound": b, "certificate": certificate_doc(&Some(c.clone()))})),
                "partition_rank": r.partition.as_ref().map(rank_doc),
            })))
        }
        Command::Points { input, list } => {
            let fam = load_family(g, input)?;
            let x = enumerate_points(&fam, &ctx)?;
            let rows: Vec<Vec<String>> = x.points().iter().map(|p| vec![point_str(p)]).collect();
            let mut doc = json!({"count": x.len()});
            if *list {
                doc["points"] = json!(x.points().iter().map(|p| p.iter().map(|v| v.0).collect::<Vec<_>>()).collect::<Vec<_>>());
            }
            Ok(Report::new(doc).table(&["point"], rows))
        }
        Command::Subspaces { input, m } => {
            let fam = load_family(g, input)?;
            let x = enumerate_points(&fam, &ctx)?;
            let subs = enumerate_subspaces_in(&x, *m, None, &ctx)?;
            Ok(Report::new(json!({"m": m, "count": subs.len(), "subspaces": subs}))
                .table(&["base", "directions"], subspace_rows(&subs)))
        }
        Command::Census { input, m, hyperplane } => {
            let fam = load_family(g, input)?;
            let n = fam.nvars();
            let w = match hyperplane {
                Some(s) => {
                    let mut v = parse_list(s, fam.field())?;
                    if v.len() != n + 1 {
                        return Err(Error::DimensionMismatch {
                            expected: n + 1,
                            got: v.len(),
                        });
                    }
                    let b = v.pop().expect("nonempty");
                    AffineEquations::hyperplane(v, b)
                }
                None => {
                    let mut c = vec![Fe::ZERO; n];
                    c[0] = Fe::ONE;
                    AffineEquations::hyperplane(c, Fe::ZERO)
                }
            };
            let x = enumerate_points(&fam, &ctx)?;
            let c = census_yz_on(&x, &w, *m, &ctx)?;
            Ok(Report::new(json!({"m": m, "z": c.z.len(), "y": c.y.len(), "ratio": c.ratio.to_string()})).table(
                &["m", "z", "y", "ratio"],
                vec![vec![m.to_string(), c.z.len().to_string(), c.y.len().to_string(), c.ratio.to_string()]],
            ))
        }
        Command::Kappa { input, m, homogeneous } => {
            let fam = load_family(g, input)?;
            let k = kappa_fibers(&fam, *m, *homogeneous, &ctx)?;
            let rows = k.fibers.iter().map(|(key, c)| vec![point_str(key), c.to_string()]).collect();
            Ok(Report::new(json!({
                "m": k.m, "homogeneous": k.homogeneous, "maps": k.maps, "targets": k.targets.to_string(),
                "attained": k.attained, "min": k.min, "max": k.max, "deviation": k.deviation.to_string(),
            }))
            .table(&["value_table", "fiber_size"], rows))
        }
        Command::Universal { input, m, limit } => {
            let fam = load_family(g, input)?;
            let u = universality_check(&fam, *m, *limit, &ctx)?;
            let missed: Vec<Value> = u.witnesses.iter().map(|ps| json!(ps.iter().map(poly_to_json).collect::<Vec<_>>())).collect();
            Ok(Report::new(json!({"universal": u.universal, "missed": u.missed.to_string(), "missed_examples": missed}))
                .negative(!u.universal))
        }
        Command::Weaktest { input, function, a } => {
            let fam = load_family(g, input)?;
            let x = enumerate_points(&fam, &ctx)?;
            let f = load_function(input, function, &x)?;
            let t = is_weakly_polynomial(&f, &x, *a, &ctx)?;
            let offending = t.offending.as_ref().map(|(s, d)| json!({"subspace": s, "degree": d}));
            Ok(Report::new(json!({
                "weakly_polynomial": t.holds, "a": a, "testing_dim": t.testing_dim,
                "subspaces_tested": t.subspaces_tested, "offending": offending,
            }))
            .negative(!t.holds))
        }
        Command::Star { input, a } => {
            let fam = load_family(g, input)?;
            let x = enumerate_points(&fam, &ctx)?;
            let s = star_check(&x, *a, &ctx)?;
            Ok(Report::new(serde_json::to_value(&s).expect("plain data")).negative(!s.holds))
        }
        Command::Extend { input, function, a, slices } => {
            let fam = load_family(g, input)?;
            let x = enumerate_points(&fam, &ctx)?;
            let f = load_function(input, function, &x)?;
            if let Some(l) = slices {
                let l = AffineFunctional::linear(parse_list(l, fam.field())?);
                let s = extend_by_slices(&f, &x, &l, *a, &ctx);
                return match s {
                    Ok(s) => Ok(Report::new(json!({
                        "feasible": true, "poly": poly_to_json(&s.poly), "levels": s.steps.len(), "solver_agrees": s.solver_agrees,
                    }))),
                    Err(Error::Infeasible(msg)) => Ok(Report::new(json!({"feasible": false, "reason": msg})).negative(true)),
                    Err(e) => Err(e),
                };
            }
            match extend_by_solve(&f, &x, *a, &ctx)? {
                Extension::Feasible(p) => Ok(Report::new(json!({"feasible": true, "poly": poly_to_json(&p)}))),
                Extension::Infeasible { dual } => Ok(Report::new(json!({
                    "feasible": false, "dual": function_to_json(&FunctionOnX::new(dual)),
                }))
                .negative(true)),
            }
        }
        Command::Xn { d, n, m, a, action } => {
            let q = g.q.ok_or_else(|| Error::InvalidInput("xn needs --q".into()))?;
            run_xn(*d, *n, q, *m, *a, action, &ctx)
        }
        Command::Nullsatz { input, cap, r } => {
            let fam = load_family(g, input)?;
            let dims = vanishing_vs_ideal_dims(&fam, *cap, &ctx)?;
            let mut doc = json!({"cap": cap, "vanishing_dim": dims.vanishing, "ideal_dim": dims.ideal, "equal": dims.equal});
            let mut negative = false;
            if let Some(r) = r {
                let r = parse_poly(&read_arg(r)?)?;
                match ideal_membership(&r, &fam, *cap, &ctx)? {
                    Membership::Member(c) => {
                        doc["member"] = json!(true);
                        doc["cofactors"] = json!(c.cofactors.iter().map(poly_to_json).collect::<Vec<_>>());
                    }
                    Membership::NotMember { dual, .. } => {
                        negative = true;
                        doc["member"] = json!(false);
                        doc["dual"] = json!(dual
                            .iter()
                            .map(|(m, c)| json!({"e": m.exps(), "c": c.0}))
                            .collect::<Vec<_>>());
                    }
                }
            }
            match rough_bound_check(&fam, None, &ctx) {
                Ok(b) => doc["rough_bound"] = json!({"count": b.count, "bound": b.bound.to_string(), "holds": b.holds}),
                Err(e) if e.is_budget() => doc["rough_bound"] = Value::Null,
                Err(e) => return Err(e),
            }
            doc["family"] = family_to_json(&fam);
            Ok(Report::new(doc).negative(negative))
        }
        Command::Suite { name, only } => {
            if name != "acceptance" {
                return Err(Error::InvalidInput(format!("unknown suite {name:?}")));
            }
            let ids = match only {
                Some(s) => s
                    .split(',')
                    .map(|t| suite::criterion_id(t.trim()).ok_or_else(|| Error::InvalidInput(format!("unknown criterion {t:?}"))))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let outcomes = suite::run_suite(&ids, &ctx);
            let failed = outcomes.iter().filter(|o| o.status == suite::Status::Fail).count();
            let refused = outcomes.iter().filter(|o| o.status == suite::Status::Refused).count();
            let rows = outcomes
                .iter()
                .map(|o| vec![o.id.to_string(), o.name.to_string(), format!("{:?}", o.status).to_lowercase(), o.summary.clone()])
                .collect();
            Ok(Report::new(json!({
                "criteria": outcomes, "passed": outcomes.len() - failed - refused, "failed": failed, "refused": refused,
            }))
            .table(&["id", "name", "status", "summary"], rows)
            .negative(failed + refused > 0))
        }
    }
}

fn run_xn(d: usize, n: usize, q: u64, m: u32, a: u32, action: &XnAction, ctx: &Ctx) -> Result<Report> {
    match action {
        XnAction::Bias => {
            let t = mu_bias(d, q, ctx)?;
            Ok(Report::new(magnitude_doc(&t)))
        }
        XnAction::Growth { ns } => {
            let ns: Vec<usize> = ns
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad n {s:?}"))))
                .collect::<Result<_>>()?;
            let rows = nc_rank_growth_check(d, q, &ns, ctx)?;
            let violated = rows.iter().any(|r| r.full_le_u == Some(false));
            let table = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.u_value.as_ref().map(rat_string).unwrap_or_default(),
                        r.t_power.as_ref().map(rat_string).unwrap_or_default(),
                        r.full_value.as_ref().map(rat_string).unwrap_or_default(),
                    ]
                })
                .collect();
            Ok(Report::new(serde_json::to_value(&rows).expect("plain data"))
                .table(&["n", "u_value", "t_power", "full_value"], table)
                .negative(violated))
        }
        XnAction::Strata => {
            let x = named::xn(d, n, q)?;
            let pts = x.points(ctx)?;
            let delta = x.field.delta_subgroup(m)?;
            let s = stratify_ys(&x, &pts, &delta);
            let rows = s.counts.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
            Ok(Report::new(serde_json::to_value(&s).expect("plain data"))
                .table(&["z", "points"], rows)
                .negative(!s.y0_is_gamma_orbit))
        }
        XnAction::Characters => {
            let x = named::xn(d, n, q)?;
            let torus = TorusT::new(x.field, m, d, n, ctx)?;
            let chars = torus.characters();
            let split = admissible_filter(&chars, a);
            let mut rows = Vec::new();
            for c in &split.plus {
                rows.push(vec![c.to_string(), "admissible+".into(), String::new()]);
            }
            for (c, gm) in &split.admissible {
                let w = gm.as_ref().map(|g| format!("{:?}", g.perms)).unwrap_or_else(|| "none".into());
                rows.push(vec![c.to_string(), "admissible".into(), w]);
            }
            for c in &split.rest {
                rows.push(vec![c.to_string(), "not admissible".into(), String::new()]);
            }
            Ok(Report::new(json!({
                "torus_order": torus.order(), "characters": chars.len(),
                "plus": split.plus.len(), "admissible": split.admissible.len() + split.plus.len(), "rest": split.rest.len(),
            }))
            .table(&["character", "class", "gamma"], rows))
        }
        XnAction::Star => {
            let x = named::xn(d, n, q)?;
            let pts = x.points(ctx)?;
            let s = star_check(&pts, a, ctx)?;
            Ok(Report::new(serde_json::to_value(&s).expect("plain data")).negative(!s.holds))
        }
        XnAction::Extend => {
            let x = named::xn(d, n, q)?;
            check_admissible_field(x.field, m, a, d)?;
            let pts = x.points(ctx)?;
            let w = weak_space(&pts, a, ctx)?;
            let mut out = Vec::new();
            for f in w.basis() {
                let e = explicit_extension(&x, &pts, &f, m, a, ctx)?;
                out.push(json!({
                    "poly": poly_to_json(&e.poly), "assembled_degree": e.assembled.degree(),
                    "components": e.components.iter().map(|c| json!({"theta": c.theta.to_string(), "gamma": c.gamma.perms, "degree": c.degree})).collect::<Vec<_>>(),
                    "reduction_trivial": e.reduction_trivial,
                }));
            }
            Ok(Report::new(json!({"weak_dim": w.dim(), "extensions": out})))
        }
    }
}
