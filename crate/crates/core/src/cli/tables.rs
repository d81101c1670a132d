//! Reference rows for the four space/Hamiltonian tables.
//!
//! Each row carries the symbolic template, the value computed by the library
//! and the same template evaluated directly with `std` functions, so the
//! command doubles as a regression check of the printed formulas.

use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::{real, Outcome, Table};
use crate::dynamics::{closed_form_residual, fit_closed_form, geodesic_flow, FlowOptions, GeodesicStart};
use crate::error::Result;
use crate::geometry::{polar_chart, ChartKind, PolarState, SpaceTag};
use crate::hamiltonians::{cz_polar, cz_polar_sw, iz_polar, polar_form, radial_reduce, HamiltonianSpec, SwCouplings};

/// Reference point: radial 0.7, angle 0.4, momenta (0.3, −0.6).
pub const RADIAL: f64 = 0.7;
pub const THETA: f64 = 0.4;
pub const P_RADIAL: f64 = 0.3;
pub const P_THETA: f64 = -0.6;
pub const B: (f64, f64) = (0.5, 0.8);
pub const BETA0: f64 = 0.5;
const EXACT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub table: u8,
    pub space: SpaceTag,
    pub quantity: String,
    pub template: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl TableRow {
    fn new(table: u8, space: SpaceTag, quantity: &str, template: String, value: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (value - expected).abs() <= tolerance * expected.abs().max(1.0);
        Self { table, space, quantity: quantity.into(), template, value, expected, tolerance, pass }
    }
}

/// Trigonometric, flat or hyperbolic radial functions.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Trig,
    Flat,
    Hyp,
}

impl Shape {
    fn of(curved_sign: f64) -> Self {
        match curved_sign {
            s if s > 0.0 => Shape::Trig,
            s if s < 0.0 => Shape::Hyp,
            _ => Shape::Flat,
        }
    }

    fn s(self, x: f64) -> f64 {
        match self {
            Shape::Trig => x.sin(),
            Shape::Flat => x,
            Shape::Hyp => x.sinh(),
        }
    }

    fn c(self, x: f64) -> f64 {
        match self {
            Shape::Trig => x.cos(),
            Shape::Flat => 1.0,
            Shape::Hyp => x.cosh(),
        }
    }

    fn t(self, x: f64) -> f64 {
        self.s(x) / self.c(x)
    }

    /// Name of `f` applied to `arg`, e.g. `sin r` or just `r` for the flat sine.
    fn name(self, f: &str, arg: &str) -> String {
        match (self, f) {
            (Shape::Flat, "sin" | "tan") => arg.to_string(),
            (Shape::Flat, _) => "1".to_string(),
            (Shape::Trig, _) => format!("{f} {arg}"),
            (Shape::Hyp, _) => format!("{f}h {arg}"),
        }
    }

    /// `sin²r`, `r²`, ... (`ascii`: `sin^2 r`, `r^2`).
    fn squared(self, f: &str, arg: &str, ascii: bool) -> String {
        let two = if ascii { "^2" } else { "²" };
        match (self, f) {
            (Shape::Flat, _) => format!("{arg}{two}"),
            (Shape::Trig, _) => format!("{f}{two}{}{arg}", if ascii { " " } else { "" }),
            (Shape::Hyp, _) => format!("{f}h{two}{}{arg}", if ascii { " " } else { "" }),
        }
    }
}

fn pm(k2: f64) -> &'static str {
    if k2 > 0.0 {
        "+"
    } else {
        "−"
    }
}

fn pm_ascii(k2: f64) -> &'static str {
    if k2 > 0.0 {
        "+"
    } else {
        "-"
    }
}

/// Deformed family: metric and curvature in the `RhoChart`.
fn table1(tag: SpaceTag) -> Result<Vec<TableRow>> {
    let sig = tag.signature();
    let k2 = sig.kappa2;
    // the deformed sphere (z = −1) is trigonometric in ρ
    let sh = Shape::of(-sig.kappa1);
    let m = polar_chart(&sig, ChartKind::RhoChart, RADIAL, THETA)?;
    let (s, c) = (sh.s(RADIAL), sh.c(RADIAL));
    let metric = match sh {
        Shape::Flat => format!("drho^2 {} rho^2 dtheta^2", pm_ascii(k2)),
        _ => format!(
            "(1/{})(drho^2 {} {} dtheta^2)",
            sh.name("cos", "rho"),
            pm_ascii(k2),
            sh.squared("sin", "rho", true)
        ),
    };
    let k_template = match sh {
        Shape::Flat => "0".to_string(),
        _ => format!("-{}/(2 {})", sh.squared("sin", "rho", true), sh.name("cos", "rho")),
    };
    let k_expected = if sh == Shape::Flat { 0.0 } else { -s * s / (2.0 * c) };
    Ok(vec![
        TableRow::new(1, tag, "g_rho_rho", metric.clone(), m.g_rr, 1.0 / c, EXACT),
        TableRow::new(1, tag, "g_theta_theta", metric, m.g_thth, k2 * s * s / c, EXACT),
        TableRow::new(1, tag, "K", k_template, m.sectional, k_expected, EXACT),
    ])
}

/// Deformed family: free integrable Hamiltonian (`g = 0`), its constant and radial form.
fn table2(tag: SpaceTag) -> Result<Vec<TableRow>> {
    let sig = tag.signature();
    let k2 = sig.kappa2;
    let sh = Shape::of(-sig.kappa1);
    let ang = Shape::of(k2);
    let model = sig.model(B.0, B.1);
    let ps = PolarState::new(RADIAL, THETA, P_RADIAL, P_THETA);
    let (s, c) = (sh.s(RADIAL), sh.c(RADIAL));
    let (st, ct) = (ang.s(THETA), ang.c(THETA));
    let (b1, b2) = B;

    let c_name = sh.name("cos", "ρ");
    let prefix = if sh == Shape::Flat { String::new() } else { c_name.clone() };
    let s2 = sh.squared("sin", "ρ", false);
    let (st2, ct2) = (ang.squared("sin", "θ", false), ang.squared("cos", "θ", false));
    let h_template = format!(
        "½{prefix}(p_ρ² {} p_θ²/{s2}) {} (2{prefix}/{s2})(b₁/{st2} {} b₂/{ct2}) + g(ρ)",
        pm(k2),
        pm(k2),
        pm(k2)
    );
    let h_expected = 0.5 * c * (P_RADIAL.powi(2) + k2 * P_THETA.powi(2) / (s * s))
        + k2 * 2.0 * c / (s * s) * (b1 / (st * st) + k2 * b2 / (ct * ct));
    let h = polar_form(&model, &HamiltonianSpec::free_i(), ChartKind::RhoChart, &ps)?;

    let cz_template = format!("p_θ² + 4b₁/{st2} {} 4b₂/{ct2}", pm(k2));
    let cz_expected = P_THETA.powi(2) + 4.0 * b1 / (st * st) + k2 * 4.0 * b2 / (ct * ct);
    let cz = cz_polar(&sig, THETA, P_THETA, b1, b2)?;

    let radial_template = if sh == Shape::Flat {
        format!("½p_ρ² {} C_z/(2ρ²) + g(ρ)", pm(k2))
    } else {
        format!("½{c_name} p_ρ² {} {c_name} C_z/(2{s2}) + g(ρ)", pm(k2))
    };
    let radial_expected = 0.5 * c * P_RADIAL.powi(2) + k2 * c * cz_expected / (2.0 * s * s);
    let radial = radial_reduce(&model, &HamiltonianSpec::free_i(), ChartKind::RhoChart, cz, RADIAL, P_RADIAL)?;
    Ok(vec![
        TableRow::new(2, tag, "H", h_template, h, h_expected, EXACT),
        TableRow::new(2, tag, "C_z", cz_template, cz, cz_expected, EXACT),
        TableRow::new(2, tag, "H_radial", radial_template, radial, radial_expected, EXACT),
    ])
}

/// Constant curvature family: metric, connection, geodesics and curvature in the `RChart`.
fn table3(tag: SpaceTag, geodesic_tol: f64) -> Result<Vec<TableRow>> {
    let sig = tag.signature();
    let k2 = sig.kappa2;
    let sh = Shape::of(sig.kappa1);
    let ang = Shape::of(k2);
    let m = polar_chart(&sig, ChartKind::RChart, RADIAL, THETA)?;
    let (s, c) = (sh.s(RADIAL), sh.c(RADIAL));
    let metric = format!("dr^2 {} {} dtheta^2", pm_ascii(k2), sh.squared("sin", "r", true));
    let minus = if k2 > 0.0 { "-" } else { "" };
    let gamma_r = match sh {
        Shape::Flat => format!("{minus}r"),
        _ => format!("{minus}{} {}", sh.name("sin", "r"), sh.name("cos", "r")),
    };
    let gamma_th = format!("1/{}", sh.name("tan", "r"));
    let curve = format!("alpha/{} = {}", paren(&sh.name("tan", "r")), paren(&ang.name("sin", "theta+theta0")));

    // a short geodesic through the reference point, fitted at its start
    let start = if k2 > 0.0 { GeodesicStart::new(RADIAL, THETA, 0.2, 1.0) } else { GeodesicStart::new(RADIAL, THETA, 1.0, 0.3) };
    let traj = geodesic_flow(&sig, ChartKind::RChart, &start, 2.0, &FlowOptions::default().sampled(0.05))?;
    let residual = match fit_closed_form(&sig, ChartKind::RChart, &traj.samples[0].state) {
        Ok(cf) => closed_form_residual(&sig, ChartKind::RChart, &traj, &cf),
        Err(_) => f64::NAN,
    };
    let k_label = sig.kappa1;
    Ok(vec![
        TableRow::new(3, tag, "g_theta_theta", metric, m.g_thth, k2 * s * s, EXACT),
        TableRow::new(3, tag, "Gamma^r_theta_theta", gamma_r, m.gamma_r_thth, -k2 * s * c, EXACT),
        TableRow::new(3, tag, "Gamma^theta_theta_r", gamma_th, m.gamma_th_thr, c / s, EXACT),
        TableRow::new(3, tag, "geodesic", curve, residual, 0.0, geodesic_tol),
        TableRow::new(3, tag, "K", format!("{k_label}"), m.sectional, k_label, 0.0),
    ])
}

/// `tan(r)` style call syntax for the ascii geodesic template.
fn paren(name: &str) -> String {
    match name.split_once(' ') {
        Some((f, arg)) => format!("{f}({arg})"),
        None => name.to_string(),
    }
}

/// Constant curvature family: the SW Hamiltonian, its two constants and radial form.
fn table4(tag: SpaceTag) -> Result<Vec<TableRow>> {
    let sig = tag.signature();
    let k2 = sig.kappa2;
    let sh = Shape::of(sig.kappa1);
    let ang = Shape::of(k2);
    let model = sig.model(B.0, B.1);
    let beta = SwCouplings::from_barriers(B.0, B.1);
    let (b1, b2) = (beta.beta1, beta.beta2);
    let ps = PolarState::new(RADIAL, THETA, P_RADIAL, P_THETA);
    let (s, t) = (sh.s(RADIAL), sh.t(RADIAL));
    let (st, ct) = (ang.s(THETA), ang.c(THETA));

    let s2 = sh.squared("sin", "r", false);
    let t2 = sh.squared("tan", "r", false);
    let s2_sp = if sh == Shape::Flat { s2.clone() } else { format!(" {s2}") };
    let t2_sp = if sh == Shape::Flat { t2.clone() } else { format!(" {t2}") };
    let (st2, ct2) = (ang.squared("sin", "θ", false), ang.squared("cos", "θ", false));
    let (st_n, ct_n) = (ang.name("sin", "θ"), ang.name("cos", "θ"));
    let t_n = sh.name("tan", "r");

    let h_template = format!("½(p_r² {} p_θ²/{s2}) + β₀{t2_sp} + (1/{s2})(β₁/{ct2} {} β₂/{st2})", pm(k2), pm(k2));
    let h_expected = 0.5 * (P_RADIAL.powi(2) + k2 * P_THETA.powi(2) / (s * s))
        + BETA0 * t * t
        + (b1 / (ct * ct) + k2 * b2 / (st * st)) / (s * s);
    let h = polar_form(&model, &HamiltonianSpec::ssw(BETA0), ChartKind::RChart, &ps)?;

    let cz_template = format!("p_θ² {} 2β₁/{ct2} + 2β₂/{st2}", pm(k2));
    let cz_expected = P_THETA.powi(2) + k2 * 2.0 * b1 / (ct * ct) + 2.0 * b2 / (st * st);
    let cz = cz_polar_sw(&sig, THETA, P_THETA, beta)?;

    let radial_template = format!("½p_r² {} C_z/(2{s2_sp}) + β₀{t2_sp}", pm(k2));
    let radial_expected = 0.5 * P_RADIAL.powi(2) + k2 * cz_expected / (2.0 * s * s) + BETA0 * t * t;
    let radial = radial_reduce(&model, &HamiltonianSpec::ssw(BETA0), ChartKind::RChart, cz, RADIAL, P_RADIAL)?;

    let iz_template = format!(
        "({st_n} p_r {} {ct_n} p_θ/{t_n})² + 2β₀{t2_sp} {st2} + 2β₂/({t2} {st2})",
        pm(k2)
    );
    let iz_expected = (st * P_RADIAL + k2 * ct * P_THETA / t).powi(2)
        + 2.0 * BETA0 * t * t * st * st
        + 2.0 * b2 / (t * t * st * st);
    let iz = iz_polar(&sig, &ps, BETA0, b2)?;
    // I_z and its template are compared up to the common sign inside the square
    Ok(vec![
        TableRow::new(4, tag, "H", h_template, h, h_expected, EXACT),
        TableRow::new(4, tag, "C_z", cz_template, cz, cz_expected, EXACT),
        TableRow::new(4, tag, "H_radial", radial_template, radial, radial_expected, EXACT),
        TableRow::new(4, tag, "I_z", iz_template, iz, iz_expected, EXACT),
    ])
}

/// Rows of the requested tables in order.
pub fn table_rows(which: &[u8], geodesic_tol: f64) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &n in which {
        let spaces = if n <= 2 { SpaceTag::DEFORMED } else { SpaceTag::CONSTANT };
        for tag in spaces {
            rows.extend(match n {
                1 => table1(tag)?,
                2 => table2(tag)?,
                3 => table3(tag, geodesic_tol)?,
                _ => table4(tag)?,
            });
        }
    }
    Ok(rows)
}

pub fn tables(cfg: &RunConfig) -> Result<Outcome> {
    let which = if cfg.tables.is_empty() { vec![1, 2, 3, 4] } else { cfg.tables.clone() };
    let rows = table_rows(&which, cfg.thresholds.geodesic)?;
    let mut t = Table::new(&["table", "space", "quantity", "template", "value", "expected", "pass"]);
    for r in &rows {
        t.push(vec![
            r.table.to_string(),
            r.space.to_string(),
            r.quantity.clone(),
            r.template.clone(),
            real(r.value),
            real(r.expected),
            r.pass.to_string(),
        ]);
    }
    let reference = json!({
        "radial": RADIAL, "theta": THETA, "p_radial": P_RADIAL, "p_theta": P_THETA,
        "b1": B.0, "b2": B.1, "beta0": BETA0, "g": 0.0,
    });
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome { results: json!({ "reference": reference, "rows": rows }), table: t, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(rows: &'a [TableRow], table: u8, space: SpaceTag, quantity: &str) -> &'a TableRow {
        rows.iter().find(|r| r.table == table && r.space == space && r.quantity == quantity).unwrap()
    }

    #[test]
    fn all_rows_match_their_templates() {
        let rows = table_rows(&[1, 2, 3, 4], 1e-6).unwrap();
        assert_eq!(rows.len(), 6 * 3 + 6 * 3 + 6 * 5 + 6 * 4);
        for r in &rows {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn reference_templates() {
        let rows = table_rows(&[1, 3, 4], 1e-6).unwrap();
        let k = find(&rows, 3, SpaceTag::S2, "K");
        assert_eq!(k.value, 1.0);
        assert_eq!(find(&rows, 3, SpaceTag::S2, "geodesic").template, "alpha/tan(r) = sin(theta+theta0)");
        assert_eq!(find(&rows, 3, SpaceTag::DS, "geodesic").template, "alpha/tanh(r) = sinh(theta+theta0)");
        assert_eq!(find(&rows, 3, SpaceTag::H2, "K").value, -1.0);
        let e2 = find(&rows, 1, SpaceTag::E2, "K");
        assert_eq!((e2.value, e2.template.as_str()), (0.0, "0"));
        assert_eq!(find(&rows, 1, SpaceTag::E2, "g_rho_rho").template, "drho^2 + rho^2 dtheta^2");
        assert_eq!(find(&rows, 1, SpaceTag::S2z, "K").template, "-sin^2 rho/(2 cos rho)");
        assert_eq!(find(&rows, 4, SpaceTag::H2, "H_radial").template, "½p_r² + C_z/(2 sinh²r) + β₀ tanh²r");
        assert_eq!(find(&rows, 4, SpaceTag::S2, "H_radial").template, "½p_r² + C_z/(2 sin²r) + β₀ tan²r");
        assert_eq!(find(&rows, 4, SpaceTag::M2, "H_radial").template, "½p_r² − C_z/(2r²) + β₀r²");
    }
}
