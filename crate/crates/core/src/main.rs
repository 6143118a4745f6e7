use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use regpet::error::{Error, Result};
use regpet::kloosterman::{dit_coefficient, kloosterman_sum, product_route_a, DEFAULT_CMAX};
use regpet::lseries::ConstantTerm;
use regpet::mp::{MpC, STANDARD_PREC, EXTENDED_PREC};
use regpet::regprod::RouteBSettings;
use regpet::report::{self, Route};
use regpet::specfun::{self, BetaVariant, BranchAngle};
use regpet::suite;
use regpet::weil::{rho_matrices, t_order, CyclicFactor, FiniteQuadraticModule};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Regularized Petersson inner products of weakly holomorphic modular forms.
#[derive(Parser, Debug)]
#[command(name = "regpet", version)]
struct Cli {
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, env = "REGPET_THREADS")]
    threads: Option<usize>,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accepted for compatibility: every reduction is already in fixed order.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Kloosterman,
    Quadrature,
    Pairing,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstArg {
    Full,
    Dropped,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpecFn {
    GammaUpper,
    ExpIntegral,
    W,
    WReal,
    BesselF,
    Digamma,
    WhittakerM,
    WhittakerW,
    Beta,
    BetaC,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Precision {
    Standard,
    Extended,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact q-expansion of a basis element as JSON.
    Basis {
        /// faber, wh, or any form label (E4, E6, Delta, J, f3, wh:-2,1).
        #[arg(long, default_value = "faber")]
        family: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = regpet::qseries::DEFAULT_ORDER)]
        order: i64,
    },
    /// Evaluate one special function.
    Specfun {
        #[arg(value_parser = ["eval"], default_value = "eval")]
        action: String,
        #[arg(long = "fn", value_enum)]
        func: SpecFn,
        /// Order r (or weight k for W).
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        /// principal, positive, or a ray angle in radians.
        #[arg(long, default_value = "principal")]
        branch: String,
        #[arg(long, value_enum, default_value = "standard")]
        precision: Precision,
    },
    /// Weil representation data of a finite quadratic module.
    Weil {
        /// Cyclic factors as order:q, comma separated, e.g. 2:1/4,5:2/5.
        #[arg(long, default_value = "2:1/4")]
        module: String,
        #[arg(long)]
        dual: bool,
    },
    /// A Kloosterman sum, or the smoothed series when --cmax is given.
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long)]
        cmax: Option<u32>,
    },
    /// Traces of a weight-0 form: CM traces for D < 0, cycle traces for D > 0 (CSV).
    Traces {
        #[arg(long, default_value = "J")]
        f: String,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        disc: Vec<i64>,
    },
    /// Coefficients of the weight-3/2 form g1 (CSV).
    G1 {
        #[arg(long, default_value_t = 40)]
        nmax: i64,
    },
    /// Regularized inner product by one or more routes (JSON).
    InnerProduct {
        #[arg(long, default_value = "f1")]
        left: String,
        #[arg(long, default_value = "f2")]
        right: String,
        #[arg(long, value_enum, default_value = "all")]
        route: RouteArg,
        #[arg(long, default_value_t = DEFAULT_CMAX)]
        cmax: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 60)]
        order: i64,
        /// Output is always JSON; accepted for symmetry.
        #[arg(long)]
        json: bool,
    },
    /// Completed L-function value (JSON).
    Lvalue {
        #[arg(long, default_value = "f1")]
        g: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, value_enum, default_value = "dropped")]
        constant: ConstArg,
    },
    /// The weight-3/2 value by three routes (JSON).
    Theorem13,
    /// Taylor coefficients of G_k against the closed form (JSON; always extended precision).
    TaylorCheck {
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Coarse node spacing; the fine fit uses h/2.
        #[arg(long, default_value_t = 0.02)]
        h: f64,
    },
    /// Cocycle residual table (JSON).
    CocycleCheck {
        #[arg(long, default_value = "f1")]
        f: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        /// File holding a JSON array of [re, im] points.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Every acceptance criterion, as a markdown scoreboard and JSON.
    ReproduceAll {
        #[arg(long, default_value_t = DEFAULT_CMAX)]
        cmax: u32,
    },
}

fn branch(s: &str) -> Result<BranchAngle> {
    match s {
        "principal" => Ok(BranchAngle::Principal),
        "positive" => Ok(BranchAngle::PositiveAxis),
        x => BranchAngle::ray(x.parse().map_err(|_| Error::Param(format!("bad branch {x}")))?),
    }
}

fn parse_module(s: &str) -> Result<FiniteQuadraticModule> {
    let mut f = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (o, q) = part.split_once(':').ok_or_else(|| Error::Param(format!("factor {part} is not order:q")))?;
        let order = o.trim().parse().map_err(|_| Error::Param(format!("bad order {o}")))?;
        f.push(CyclicFactor { order, q: q.trim().to_string() });
    }
    FiniteQuadraticModule::from_factors(&f)
}

/// Output text and whether all requested checks passed.
fn run(cmd: Cmd) -> Result<(String, bool)> {
    let js = |kind: &str, v: &serde_json::Value| report::to_json_string(kind, v);
    match cmd {
        Cmd::Basis { family, m, k, order } => Ok((js("basis", &report::basis(&family, m, k, order)?)?, true)),
        Cmd::Specfun { func, r, n, re, im, branch: b, precision, .. } => {
            let z = Complex64::new(re, im);
            let br = branch(&b)?;
            let v = match (func, precision) {
                (SpecFn::ExpIntegral, Precision::Extended) => {
                    let v = specfun::exp_integral_extended(r, &MpC::from_c64(EXTENDED_PREC, z), br)?.to_c64();
                    specfun::SpecValue { value: v, abs_err: 2f64.powi(-(EXTENDED_PREC as i32) + 8) * v.norm() }
                }
                (SpecFn::GammaUpper, _) => specfun::gamma_upper(r, z, br)?,
                (SpecFn::ExpIntegral, _) => specfun::exp_integral(r, z, br)?,
                (SpecFn::W, _) => specfun::w_k(r, z)?,
                (SpecFn::WReal, _) => specfun::w_k_real(r, re)?,
                (SpecFn::BesselF, _) => specfun::bessel_f(re)?,
                (SpecFn::Digamma, _) => specfun::digamma(z)?,
                (SpecFn::WhittakerM, _) => specfun::whittaker_m(n, re)?,
                (SpecFn::WhittakerW, _) => specfun::whittaker_w(n, re)?,
                (SpecFn::Beta, _) => specfun::beta_half(re, BetaVariant::Beta)?,
                (SpecFn::BetaC, _) => specfun::beta_half(re, BetaVariant::BetaC)?,
            };
            let prec = match precision {
                Precision::Standard => STANDARD_PREC,
                Precision::Extended => EXTENDED_PREC,
            };
            let body = json!({
                "value": {"re": v.value.re, "im": v.value.im},
                "abs_err": v.abs_err,
                "params": {"fn": format!("{func:?}"), "r": r, "n": n, "re": re, "im": im, "branch": b, "prec_bits": prec},
            });
            Ok((js("specfun", &body)?, true))
        }
        Cmd::Weil { module, dual } => {
            let m = parse_module(&module)?;
            let (t, s) = rho_matrices(&m, dual);
            let mat = |a: &Vec<Vec<Complex64>>| a.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>();
            let g = m.gauss_sum();
            let body = json!({
                "module": module,
                "dual": dual,
                "size": m.size(),
                "level": m.level(),
                "t_order": t_order(&m, dual),
                "signature": m.signature(),
                "gauss_sum": [g.re, g.im],
                "elements": m.elements(),
                "q": (0..m.size()).map(|i| m.q(i).to_string()).collect::<Vec<_>>(),
                "rho_t": mat(&t),
                "rho_s": mat(&s),
            });
            Ok((js("weil", &body)?, true))
        }
        Cmd::Kloosterman { m, n, c, cmax } => {
            let body = match (c, cmax) {
                (Some(c), _) => json!({"m": m, "n": n, "c": c, "value": kloosterman_sum(m, n, c)?}),
                (None, Some(cm)) => {
                    let (mu, nu) = (u32::try_from(m), u32::try_from(n));
                    let (Ok(mu), Ok(nu)) = (mu, nu) else {
                        return Err(Error::Param("the series needs positive m, n".into()));
                    };
                    json!({
                        "dit_coefficient": dit_coefficient(mu, nu, cm)?,
                        "product": product_route_a(mu, nu, cm)?,
                    })
                }
                _ => return Err(Error::Param("give --c or --cmax".into())),
            };
            Ok((js("kloosterman", &body)?, true))
        }
        Cmd::Traces { f, disc } => Ok((regpet::cmtraces::to_csv(&report::traces(&f, &disc)?), true)),
        Cmd::G1 { nmax } => Ok((report::g1_csv(nmax)?, true)),
        Cmd::InnerProduct { left, right, route, cmax, tol, order, .. } => {
            let r = match route {
                RouteArg::Kloosterman => Route::Kloosterman,
                RouteArg::Quadrature => Route::Quadrature,
                RouteArg::Pairing => Route::Pairing,
                RouteArg::All => Route::All,
            };
            let s = RouteBSettings { tol, ..RouteBSettings::default() };
            let rep = report::inner_product(&left, &right, r, cmax, &s, order)?;
            let ok = rep.max_pairwise_dev() <= 1e-2;
            Ok((report::to_json_string("inner-product", &rep)?, ok))
        }
        Cmd::Lvalue { g, s, t0, constant } => {
            let c = match constant {
                ConstArg::Full => ConstantTerm::Full,
                ConstArg::Dropped => ConstantTerm::Dropped,
            };
            Ok((js("lvalue", &report::lvalue(&g, s, t0, c)?)?, true))
        }
        Cmd::Theorem13 => {
            let t = report::three_halves()?;
            let ok = t.max_pairwise_dev < 1e-4;
            Ok((report::to_json_string("theorem13", &t)?, ok))
        }
        Cmd::TaylorCheck { k, n, h } => {
            let t = report::taylor(k, n, h)?;
            let ok = t.dev < 1e-5 && t.self_dev < 1e-5;
            Ok((report::to_json_string("taylor-check", &t)?, ok))
        }
        Cmd::CocycleCheck { f, k, points } => {
            let pts: Vec<Complex64> = match points {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)?;
                    let raw: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(|e| Error::Param(e.to_string()))?;
                    raw.iter().map(|p| Complex64::new(p[0], p[1])).collect()
                }
                None => suite::COCYCLE_POINTS.iter().map(|&(x, y)| Complex64::new(x, y)).collect(),
            };
            let rows = report::cocycle(&f, k, &pts)?;
            let ok = report::cocycle_pass(&rows);
            Ok((report::to_json_string("cocycle-check", &rows)?, ok))
        }
        Cmd::ReproduceAll { cmax } => {
            let cs = suite::run_all((cmax / 10).max(1), cmax)?;
            let ok = cs.iter().all(|c| c.pass());
            let mut text = suite::scoreboard(&cs);
            text.push('\n');
            text.push_str(&report::to_json_string("reproduce-all", &cs)?);
            Ok((text, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok((text, ok)) => {
            print!("{text}");
            if let Some(p) = cli.out {
                if let Err(e) = std::fs::write(&p, &text) {
                    eprintln!("error: writing {}: {e}", p.display());
                    return ExitCode::from(2);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more checks exceeded their tolerance");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
