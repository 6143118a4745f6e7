//! Versioned JSON reports for the command-line front end, and a JSON
//! formatter that writes every float with 17 significant digits.

use crate::cmtraces::{cycle_trace, cm_trace, g1_coefficients, g1_vector, hauptmodul, TraceValue, TRACE_ORDER};
use crate::cocycle::{check_point, CocycleEvaluator, CocycleSettings, PointResiduals};
use crate::error::{Error, Result};
use crate::kloosterman::partial_sums;
use crate::lseries::{horocycle_default, lstar, taylor_check, ConstantTerm, GkSettings, LValue, TaylorCheck};
use crate::qseries::{classical_form, wh_basis, FormLabel, QSeries};
use crate::regprod::{
    as_vector, product_route_b_scalar, product_route_b_vector, product_route_c, HarmonicPlus, ProductReport,
    RouteBSettings, PLUS_SPACE_FACTOR,
};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::io;

pub const SCHEMA_VERSION: u32 = 1;

/// Pretty printing with floats as 17 significant digits.
struct SigFormatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for SigFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v == 0.0 {
            return w.write_all(b"0.0");
        }
        write!(w, "{v:.16e}")
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

/// Serializes with the schema version and crate version attached at the top.
pub fn to_json_string<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": env!("CARGO_PKG_VERSION"),
        "kind": kind,
        "result": serde_json::to_value(body).map_err(|e| Error::Io(e.to_string()))?,
    });
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigFormatter(PrettyFormatter::new()));
    v.serialize(&mut ser).map_err(|e| Error::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

/// Parses a form selector such as `f1`, `J`, `wh:-2,1` or `E4`.
pub fn form(label: &str, order: i64) -> Result<QSeries> {
    let l = label.trim();
    if l.eq_ignore_ascii_case("j") {
        return Ok(hauptmodul(order));
    }
    if let Some(m) = l.strip_prefix("fm:") {
        let m: i64 = m.trim().parse().map_err(|_| Error::UnsupportedLabel(l.to_string()))?;
        return classical_form(&FormLabel::Faber(m), order);
    }
    classical_form(&FormLabel::parse(l)?, order)
}

/// The element of weight k with the smallest pole order.
pub fn minimal_form(k: i64, order: i64) -> Result<QSeries> {
    for m in 1..=(1 - k / 12).max(1) + 1 {
        if let Ok(f) = wh_basis(k, m, order) {
            return Ok(f);
        }
    }
    Err(Error::NoSuchForm { k, m: 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Kloosterman,
    Quadrature,
    Pairing,
    All,
}

fn faber_index(f: &QSeries) -> Option<u32> {
    if f.weight2() != 0 || f.denom() != 1 {
        return None;
    }
    let pp = f.principal_part();
    match pp.as_slice() {
        [(n, c)] if c == &BigRational::from_integer(1.into()) => Some((-n) as u32),
        _ => None,
    }
}

/// Inner product by the requested routes.
pub fn inner_product(left: &str, right: &str, route: Route, c_max: u32, s: &RouteBSettings, order: i64) -> Result<ProductReport> {
    let f = form(left, order)?;
    let g = form(right, order)?;
    let mut rep = ProductReport::new(Complex64::new(0.0, 0.0));
    let mut main = None;
    if matches!(route, Route::Quadrature | Route::All) {
        let b = product_route_b_scalar(&f, &g, s)?;
        rep.add_route("quadrature", b.value, b.err);
        main = Some(b.value);
    }
    let pair = (faber_index(&f), faber_index(&g));
    if matches!(route, Route::Kloosterman | Route::Pairing | Route::All) {
        let (Some(m), Some(n)) = pair else {
            return Err(Error::Unsupported("the Kloosterman and pairing routes need basis elements f_m, f_n".into()));
        };
        let ps = partial_sums(&[(m, n)], c_max)?;
        let est = ps.product(0, c_max)?;
        if matches!(route, Route::Kloosterman | Route::All) {
            rep.add_route("kloosterman", Complex64::new(est.value, 0.0), est.tail_estimate);
            main.get_or_insert(Complex64::new(est.value, 0.0));
        }
        if matches!(route, Route::Pairing | Route::All) {
            // G^+ for g = f_n has coefficient -4 pi L_{n,m} at q^m; L is symmetric
            let l = ps.dit_coefficient(0, c_max)?;
            let mut gp = HarmonicPlus::new();
            gp.insert((0, BigRational::from_integer((m as i64).into())), Complex64::new(-4.0 * PI * l.value, 0.0));
            let v = product_route_c(&as_vector(&f), &gp)?;
            rep.add_route("pairing", v, 4.0 * PI * l.tail_estimate);
            main.get_or_insert(v);
        }
        rep.param("c_max", c_max);
    }
    rep.value = main.unwrap_or_default().into();
    rep.param("left", left);
    rep.param("right", right);
    rep.param("order", order);
    rep.param("tol", s.tol);
    rep.param("nodes", s.nodes);
    rep.param("max_pairwise_dev", rep.max_pairwise_dev());
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreeHalves {
    pub horocycle: f64,
    pub lvalue_route: f64,
    pub quadrature_route: f64,
    pub max_pairwise_dev: f64,
    pub horocycle_err: f64,
}

/// The weight-3/2 value three ways: horocycle integral, (3/4 pi) Re L*_J(0),
/// and 3/2 times the vector-valued product of g1 with itself.
pub fn three_halves() -> Result<ThreeHalves> {
    let h = horocycle_default()?;
    let l = 3.0 / (4.0 * PI) * lstar(&hauptmodul(TRACE_ORDER), 0.0, 1.0, ConstantTerm::Dropped)?.re;
    let g = g1_vector(120)?;
    let q = PLUS_SPACE_FACTOR * product_route_b_vector(&g, &g, &RouteBSettings::default())?.value.re;
    let v = [h.scalar, l, q];
    let mut dev = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            dev = dev.max((v[i] - v[j]).abs() / v[j].abs());
        }
    }
    Ok(ThreeHalves { horocycle: h.scalar, lvalue_route: l, quadrature_route: q, max_pairwise_dev: dev, horocycle_err: h.err })
}

pub fn lvalue(g: &str, s: f64, t0: f64, conv: ConstantTerm) -> Result<Value> {
    let f = form(g, TRACE_ORDER)?;
    let v: LValue = lstar(&f, s, t0, conv)?;
    Ok(json!({
        "value": {"re": v.re, "im": v.im},
        "err": v.err,
        "params": {"g": g, "s": s, "t0": t0, "constant_term": conv},
    }))
}

pub fn taylor(k: i64, n: u32, h: f64) -> Result<TaylorCheck> {
    let f = minimal_form(k, 70)?;
    taylor_check(&f, n, h, GkSettings::default())
}

/// CM traces for D < 0, cycle traces for nonsquare D > 0.
pub fn traces(f: &str, discs: &[i64]) -> Result<Vec<TraceValue>> {
    let s = form(f, TRACE_ORDER)?;
    discs.iter().map(|&d| if d < 0 { cm_trace(&s, d) } else { cycle_trace(&s, d) }).collect()
}

/// n,coefficient rows of g1.
pub fn g1_csv(n_max: i64) -> Result<String> {
    let mut out = String::from("n,coefficient\n");
    for (n, c) in g1_coefficients(n_max)? {
        out.push_str(&format!("{n},{c}\n"));
    }
    Ok(out)
}

pub fn cocycle(f: &str, k: i64, points: &[Complex64]) -> Result<Vec<PointResiduals>> {
    let s = form(f, 60)?;
    if s.weight2() != 2 * k {
        return Err(Error::Param(format!("{f} has weight {}, not {k}", s.weight())));
    }
    let ev = CocycleEvaluator::new(&s, CocycleSettings::default())?;
    points.iter().map(|&p| check_point(&ev, p)).collect()
}

/// Whether the residual table meets the acceptance bounds.
pub fn cocycle_pass(rows: &[PointResiduals]) -> bool {
    rows.iter().all(|r| {
        r.fs_vs_slash < 1e-7
            && r.period_s < 1e-7
            && r.period_u < 1e-7
            && r.cocycle_st < 1e-7
            && r.eichler_relation.map_or(true, |e| e < 1e-6)
            && r.eichler_law < 1e-8
            && r.coboundary < 1e-8
            && r.xi < 1e-6
            && r.holomorphy < 1e-7
    })
}

/// Basis series as JSON.
pub fn basis(family: &str, m: i64, k: i64, order: i64) -> Result<Value> {
    let s = match family {
        "faber" => classical_form(&FormLabel::Faber(m), order)?,
        "wh" => wh_basis(k, m, order)?,
        other => form(other, order)?,
    };
    serde_json::to_value(s.to_json()).map_err(|e| Error::Io(e.to_string()))
}
