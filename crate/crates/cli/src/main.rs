use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use pha_core::chain::{potential_from_f1, PotentialForm};
use pha_core::closed_form::{self, P4Params, P5Params};
use pha_core::io::{ChainDocument, OrbitRecord, RatFunDoc};
use pha_core::numeric::{self, Grid};
use pha_core::ratfun::to_f64;
use pha_core::susy::{self, SeedSpec};
use pha_core::weyl::{self, Generator};
use pha_core::{
    format_rational, parse_decimal, parse_ratfun, parse_rational, symmetric_seed, BigRat,
    ChainParams, ChainSolution, RatFun,
};

mod output;

use output::{csv_line, Failure};

/// `println!` that exits quietly when the reader closes the pipe.
macro_rules! out {
    ($($t:tt)*) => {
        emit(format_args!($($t)*))
    };
}

fn emit(args: std::fmt::Arguments) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout
        .write_fmt(args)
        .and_then(|()| stdout.write_all(b"\n"))
    {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
        std::process::exit(if e.kind() == io::ErrorKind::BrokenPipe {
            0
        } else {
            1
        });
    }
}

#[derive(Parser)]
#[command(
    name = "pha",
    version,
    about = "Dressing chains, Bäcklund orbits and SUSY partners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum OrbitFormat {
    #[default]
    Json,
    Csv,
    /// One `from,generator,to` row per edge.
    Edges,
    /// One row per member giving the image under each generator.
    Adjacency,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// The symmetric seed f_i = (λx + c0)/n.
    Seed {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: BigRat,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        c0: BigRat,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Bäcklund orbit of the symmetric seed of period m + 1.
    Orbit {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: BigRat,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        c0: BigRat,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t)]
        format: OrbitFormat,
    },
    /// Exact chain residuals of a candidate solution.
    Residual {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Randomized exact check of the group relations.
    Relations {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Potential V recovered from f_1.
    Potential {
        #[arg(long, value_parser = ratfun, allow_hyphen_values = true)]
        f1: RatFun,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        eps1: BigRat,
        /// Use V = f1' + f1^2 + ε_1 instead of (f1' + f1^2)/2 + ε_1.
        #[arg(long)]
        printed: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Wronskian partner of the oscillator and its transformed states.
    Susy(SusyArgs),
    /// RK4 integration of an odd-period chain.
    Integrate {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: BigRat,
        /// ε_1..ε_n; defaults to the symmetric-seed progression.
        #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
        eps: Vec<BigRat>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        init: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Painlevé IV (symbolic or fitted) and Painlevé V (sampled) residuals.
    Painleve(PainleveArgs),
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    lambda: BigRat,
    #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    eps: Vec<BigRat>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
    c0: BigRat,
    /// f_1, f_2, ... in order; repeat the flag.
    #[arg(long = "f", value_parser = ratfun, allow_hyphen_values = true, required = true)]
    f: Vec<RatFun>,
}

impl ChainArgs {
    fn solution(&self) -> Result<ChainSolution, Failure> {
        let params = ChainParams::new(self.lambda.clone(), self.eps.clone(), self.c0.clone())
            .map_err(|e| Failure::new("chain", e))?;
        ChainSolution::new(params, self.f.clone()).map_err(|e| Failure::new("chain", e))
    }
}

#[derive(Args)]
struct SusyArgs {
    /// Seed `eps,nu`; repeat for a multi-step transformation.
    #[arg(long = "seed", value_parser = seed_pair, allow_hyphen_values = true)]
    seeds: Vec<(BigRat, f64)>,
    /// Bound state ψ_n used as a seed; repeat as needed.
    #[arg(long = "bound")]
    bound: Vec<usize>,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    x1: f64,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Highest transformed state φ_N written.
    #[arg(long, default_value_t = 5)]
    states: usize,
    /// Levels per ladder in the spectrum report.
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct PainleveArgs {
    #[arg(long, conflicts_with = "five", required_unless_present = "five")]
    four: bool,
    #[arg(long)]
    five: bool,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
    b0: BigRat,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
    b1: BigRat,
    /// g(x) for Painlevé IV.
    #[arg(long, value_parser = ratfun, allow_hyphen_values = true)]
    g: Option<RatFun>,
    /// Fit (b0, b1) to g = f_1 + λx - c0 of the given chain instead.
    #[arg(long, requires = "four")]
    fit: bool,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    lambda: Option<BigRat>,
    #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
    eps: Vec<BigRat>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
    c0: BigRat,
    #[arg(long = "f", value_parser = ratfun, allow_hyphen_values = true)]
    f: Vec<RatFun>,
    /// w(z) for Painlevé V, written in `z` (or `x`).
    #[arg(long, value_parser = ratfun_in_z, allow_hyphen_values = true)]
    w: Option<RatFun>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c3: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c4: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    x1: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn rational(s: &str) -> Result<BigRat, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn ratfun(s: &str) -> Result<RatFun, String> {
    parse_ratfun(s).map_err(|e| e.to_string())
}

fn ratfun_in_z(s: &str) -> Result<RatFun, String> {
    ratfun(&s.replace('z', "x"))
}

fn seed_pair(s: &str) -> Result<(BigRat, f64), String> {
    let (e, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected eps,nu, got {s:?}"))?;
    let eps = parse_decimal(e).ok_or_else(|| format!("bad eps {e:?}"))?;
    let nu = n
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad nu {n:?}: {e}"))?;
    Ok((eps, nu))
}

fn rats(v: &[BigRat]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn print_json<T: Serialize>(v: &T) {
    out!("{}", serde_json::to_string(v).expect("serializable"));
}

fn grid(x0: f64, x1: f64, steps: usize) -> Result<Grid, Failure> {
    Grid::new(x0, x1, steps).map_err(|e| Failure::new("grid", e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Seed {
            n,
            lambda,
            c0,
            format,
        } => {
            let sol = symmetric_seed(n, lambda, c0).map_err(|e| Failure::new("chain", e))?;
            emit_chain(&sol, format);
        }
        Command::Orbit {
            m,
            lambda,
            c0,
            depth,
            format,
        } => cmd_orbit(m, lambda, c0, depth, format)?,
        Command::Residual { chain, format } => {
            let sol = chain.solution()?;
            let res = sol.residuals();
            match format {
                Format::Json => print_json(&json!({
                    "is_solution": res.iter().all(RatFun::is_zero),
                    "residuals": res.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "residual_docs": res.iter().map(RatFunDoc::from).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    out!("equation,residual,zero");
                    for (i, r) in res.iter().enumerate() {
                        out!(
                            "{},{},{}",
                            i + 1,
                            csv_line::quote(&r.to_string()),
                            r.is_zero()
                        );
                    }
                }
            }
        }
        Command::Relations {
            m,
            trials,
            seed,
            format,
        } => {
            let report =
                weyl::verify_relations(m, trials, seed).map_err(|e| Failure::new("weyl", e))?;
            match format {
                Format::Json => print_json(&report),
                Format::Csv => {
                    out!("relation,status,trials,undefined,failures");
                    for c in &report.checks {
                        let (status, t, u, f) = match &c.status {
                            weyl::CheckStatus::Held { trials, undefined } => {
                                ("held", *trials, *undefined, 0)
                            }
                            weyl::CheckStatus::Violated { failures, .. } => {
                                ("violated", 0, 0, *failures)
                            }
                            weyl::CheckStatus::Skipped { .. } => ("skipped", 0, 0, 0),
                        };
                        out!("{},{status},{t},{u},{f}", csv_line::quote(&c.relation));
                    }
                }
            }
            if !report.all_hold() {
                return Err(Failure::msg(
                    "relation_violated",
                    format!("{} relation(s) violated", report.violations()),
                ));
            }
        }
        Command::Potential {
            f1,
            eps1,
            printed,
            format,
        } => {
            let form = if printed {
                PotentialForm::Printed
            } else {
                PotentialForm::Factorized
            };
            let v = potential_from_f1(&f1, &eps1, form);
            match format {
                Format::Json => print_json(&json!({
                    "v": v.to_string(),
                    "doc": RatFunDoc::from(&v),
                })),
                Format::Csv => {
                    out!("v");
                    out!("{}", csv_line::quote(&v.to_string()));
                }
            }
        }
        Command::Susy(args) => cmd_susy(args)?,
        Command::Integrate {
            lambda,
            eps,
            init,
            x0,
            x1,
            steps,
            format,
        } => {
            let n = init.len();
            let params = if eps.is_empty() {
                symmetric_seed(n, lambda, BigRat::from_integer(0.into()))
                    .map_err(|e| Failure::new("chain", e))?
                    .params()
                    .clone()
            } else {
                ChainParams::new(lambda, eps, BigRat::from_integer(0.into()))
                    .map_err(|e| Failure::new("chain", e))?
            };
            let g = grid(x0, x1, steps)?;
            let sc = numeric::rk4_integrate(&init, &params, &g)
                .map_err(|e| Failure::new("integration", e))?;
            let xs = g.points();
            match format {
                Format::Csv => {
                    let header: Vec<String> = std::iter::once("x".to_string())
                        .chain((1..=n).map(|i| format!("f_{i}")))
                        .collect();
                    out!("{}", header.join(","));
                    for (k, x) in xs.iter().enumerate() {
                        out!("{}", csv_line::floats(*x, &sc.row(k)));
                    }
                }
                Format::Json => print_json(&json!({
                    "x": xs,
                    "f": sc.f,
                    "conservation_defect": numeric::conservation_defect(&sc).ok(),
                })),
            }
        }
        Command::Painleve(args) => cmd_painleve(args)?,
    }
    Ok(())
}

fn emit_chain(sol: &ChainSolution, format: Format) {
    match format {
        Format::Json => print_json(&ChainDocument::from(sol)),
        Format::Csv => {
            out!("i,eps,f");
            for (i, (e, f)) in sol.params().eps().iter().zip(sol.f()).enumerate() {
                out!(
                    "{},{},{}",
                    i + 1,
                    format_rational(e),
                    csv_line::quote(&f.to_string())
                );
            }
        }
    }
}

fn cmd_orbit(
    m: usize,
    lambda: BigRat,
    c0: BigRat,
    depth: usize,
    format: OrbitFormat,
) -> Result<(), Failure> {
    let orbit =
        weyl::orbit_from_seed(m + 1, lambda, c0, depth).map_err(|e| Failure::new("weyl", e))?;
    let n = m + 1;
    match format {
        OrbitFormat::Json => {
            for (i, member) in orbit.members.iter().enumerate() {
                print_json(&OrbitRecord::new(i, member));
            }
        }
        OrbitFormat::Csv => {
            let header: Vec<String> = ["index".to_string(), "word".to_string()]
                .into_iter()
                .chain((1..=n).map(|i| format!("alpha_{i}")))
                .chain((1..=n).map(|i| format!("f_{i}")))
                .collect();
            out!("{}", header.join(","));
            for (i, member) in orbit.members.iter().enumerate() {
                let fields: Vec<String> =
                    [i.to_string(), csv_line::quote(&member.word.to_string())]
                        .into_iter()
                        .chain(member.state.alpha.values().iter().map(format_rational))
                        .chain(
                            member
                                .solution
                                .f()
                                .iter()
                                .map(|f| csv_line::quote(&f.to_string())),
                        )
                        .collect();
                out!("{}", fields.join(","));
            }
        }
        OrbitFormat::Edges => {
            out!("from,generator,to");
            for e in &orbit.edges {
                out!("{},{},{}", e.from, e.generator, e.to);
            }
        }
        OrbitFormat::Adjacency => {
            let gens: Vec<Generator> = (0..n).map(Generator::S).chain([Generator::Pi]).collect();
            let header: Vec<String> = std::iter::once("member".to_string())
                .chain(gens.iter().map(ToString::to_string))
                .collect();
            out!("{}", header.join(","));
            for i in 0..orbit.len() {
                let row: Vec<String> = std::iter::once(i.to_string())
                    .chain(gens.iter().map(|g| {
                        orbit
                            .edges
                            .iter()
                            .find(|e| e.from == i && e.generator == *g)
                            .map(|e| e.to.to_string())
                            .unwrap_or_default()
                    }))
                    .collect();
                out!("{}", row.join(","));
            }
        }
    }
    Ok(())
}

fn cmd_susy(args: SusyArgs) -> Result<(), Failure> {
    let specs: Vec<SeedSpec> = args
        .seeds
        .iter()
        .map(|(e, nu)| SeedSpec::general(to_f64(e), *nu))
        .chain(args.bound.iter().map(|&n| SeedSpec::hermite_bound(n)))
        .collect();
    let exact_eps: Vec<BigRat> = args
        .seeds
        .iter()
        .map(|(e, _)| e.clone())
        .chain(
            args.bound
                .iter()
                .map(|&n| BigRat::new((2 * n as i64 + 1).into(), 2.into())),
        )
        .collect();
    let g = grid(args.x0, args.x1, args.steps)?;
    let susy_err = |e: susy::SusyError| {
        let mut f = Failure::new("susy", &e);
        if let susy::SusyError::Node { lo, hi } = e {
            f.detail = Some(json!({ "node_bracket": [lo, hi] }));
        }
        f
    };
    let nodes = susy::nonsingularity_check(&specs, &g).map_err(susy_err)?;
    if let Some(&(lo, hi)) = nodes.node_brackets.first() {
        return Err(susy_err(susy::SusyError::Node { lo, hi }));
    }
    let v = susy::partner_potential_grid(&specs, &g).map_err(susy_err)?;
    // states annihilated by the transformation are written as zero columns
    let phis: Vec<Vec<f64>> = (0..=args.states)
        .map(|n| match susy::transformed_state_grid(&specs, n, &g) {
            Err(susy::SusyError::NormalizationPole { .. }) => Ok(vec![0.0; g.len()]),
            other => other,
        })
        .collect::<Result<_, _>>()
        .map_err(susy_err)?;
    let xs = g.points();
    match args.format {
        Format::Csv => {
            let header: Vec<String> = ["x".to_string(), "V1".to_string()]
                .into_iter()
                .chain((0..=args.states).map(|n| format!("phi_{n}")))
                .collect();
            out!("{}", header.join(","));
            for (k, x) in xs.iter().enumerate() {
                let row: Vec<f64> = std::iter::once(v[k])
                    .chain(phis.iter().map(|p| p[k]))
                    .collect();
                out!("{}", csv_line::floats(*x, &row));
            }
        }
        Format::Json => {
            let ladder = susy::ladder_polynomial(&exact_eps);
            let mut extremal = vec![BigRat::new(1.into(), 2.into())];
            for e in &exact_eps {
                extremal.push(e.clone());
                extremal.push(e + BigRat::from_integer(1.into()));
            }
            let spectra = susy::ladder_spectrum(&extremal, args.levels);
            print_json(&json!({
                "seeds": specs,
                "nonsingularity": nodes,
                "ladder": {
                    "n_coeffs": rats(ladder.n.coeffs()),
                    "p_coeffs": rats(ladder.p.coeffs()),
                },
                "extremal": rats(&extremal),
                "spectra": spectra,
                "x": xs,
                "v1": v,
                "phi": phis,
            }));
        }
    }
    Ok(())
}

fn cmd_painleve(args: PainleveArgs) -> Result<(), Failure> {
    let g = grid(args.x0, args.x1, args.steps)?;
    let xs = g.points();
    let cf = |e: closed_form::ClosedFormError| Failure::new("painleve", e);
    if args.five {
        let w = args
            .w
            .ok_or_else(|| Failure::msg("usage", "--five needs --w".to_string()))?;
        let p = P5Params {
            c1: args.c1,
            c2: args.c2,
            c3: args.c3,
            c4: args.c4,
        };
        let res = closed_form::painleve5_residual_grid(closed_form::ratfun_sampler(&w), &p, &xs)
            .map_err(cf)?;
        return emit_grid_residual("z", &xs, &res, args.format, Value::Null);
    }
    let (gfun, params, extra) = if args.fit {
        let lambda = args
            .lambda
            .ok_or_else(|| Failure::msg("usage", "--fit needs --lambda".to_string()))?;
        let chain = ChainArgs {
            lambda,
            eps: args.eps,
            c0: args.c0,
            f: args.f,
        };
        let fit = closed_form::painleve4_fit(&chain.solution()?).map_err(cf)?;
        let extra = json!({
            "fit": {
                "b0": format_rational(&fit.params.b0),
                "b1": format_rational(&fit.params.b1),
                "sample_points": rats(&fit.sample_points),
                "consistent": fit.consistent(),
                "g": fit.g.to_string(),
            }
        });
        (fit.g, fit.params, extra)
    } else {
        let gfun = args
            .g
            .ok_or_else(|| Failure::msg("usage", "--four needs --g or --fit".to_string()))?;
        (
            gfun,
            P4Params {
                b0: args.b0,
                b1: args.b1,
            },
            Value::Null,
        )
    };
    let symbolic = closed_form::painleve4_residual(&gfun, &params).map_err(cf)?;
    let res: Vec<f64> = if symbolic.is_zero() {
        vec![0.0; xs.len()]
    } else {
        closed_form::painleve4_residual_grid(closed_form::ratfun_sampler(&gfun), &params, &xs)
            .map_err(cf)?
    };
    let mut extra = extra;
    let obj = json!({
        "symbolic_residual": symbolic.to_string(),
        "exact_zero": symbolic.is_zero(),
        "b0": format_rational(&params.b0),
        "b1": format_rational(&params.b1),
    });
    merge(&mut extra, obj);
    emit_grid_residual("x", &xs, &res, args.format, extra)
}

fn merge(into: &mut Value, from: Value) {
    if into.is_null() {
        *into = json!({});
    }
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

fn emit_grid_residual(
    var: &str,
    xs: &[f64],
    res: &[f64],
    format: Format,
    extra: Value,
) -> Result<(), Failure> {
    let max = closed_form::max_abs(res);
    match format {
        Format::Csv => {
            out!("{var},residual");
            for (x, r) in xs.iter().zip(res) {
                out!("{}", csv_line::floats(*x, &[*r]));
            }
        }
        Format::Json => {
            let mut out = json!({
                var: xs,
                "residual": res,
                "max_residual": max,
            });
            merge(&mut out, extra);
            print_json(&out);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            print_json(&f);
            eprintln!("error: {}", f.message);
            ExitCode::from(1)
        }
    }
}
