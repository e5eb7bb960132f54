use num_complex::Complex64;
use serde_json::{json, Value};

use k3vol::binaryforms::P1Point;
use k3vol::eisenman::{logspace, vanishing_certificate};
use k3vol::elliptic::{eisenstein_g2, eisenstein_g3, wp_both};
use k3vol::fibration::{kodaira_table_json, KODAIRA_TABLE};
use k3vol::k3lattice::{contains_hyperbolic_plane, lattice_l, neron_severi, IntegralLattice, PeriodPoint};

use crate::input;
use crate::output::{CliError, Header, Report};
use crate::RunConfig;

fn point_json(p: &P1Point) -> Value {
    let (s, t) = p.canonical();
    json!({"s": s, "t": t, "label": p.to_string()})
}

fn point_csv(p: &P1Point) -> String {
    let (s, t) = p.canonical();
    format!("{},{},{},{}", s.re, s.im, t.re, t.im)
}

fn complex_rows(rows: &[(&str, Complex64)]) -> String {
    let mut out = String::from("name,re,im\n");
    for (name, z) in rows {
        out.push_str(&format!("{name},{},{}\n", z.re, z.im));
    }
    out
}

pub fn discriminant(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = input::fibration(cfg)?;
    let locus = x.singular_locus();
    let sum: usize = locus.iter().map(|(_, m)| m).sum();
    let points: Vec<Value> = locus
        .iter()
        .map(|(p, m)| json!({"point": point_json(p), "multiplicity": m}))
        .collect();
    let mut csv = String::from("s_re,s_im,t_re,t_im,multiplicity\n");
    for (p, m) in locus {
        csv.push_str(&format!("{},{m}\n", point_csv(p)));
    }
    let result = json!({
        "g2": x.g2(),
        "g3": x.g3(),
        "delta": x.delta(),
        "singular_locus": points,
        "distinct": locus.len(),
        "multiplicity_sum": sum,
    });
    let mut report = Report::new(Header::new("discriminant", cfg), result, csv);
    report.require(sum == 24, format!("multiplicity sum is {sum}, expected 24"));
    Ok(report)
}

pub fn fibers(cfg: &RunConfig, dump_table: bool) -> Result<Report, CliError> {
    if dump_table {
        let mut csv = String::from("label,ord_g2,ord_g3,ord_delta\n");
        for r in &KODAIRA_TABLE {
            csv.push_str(&format!("{},{},{},{}\n", r.label, r.ord_g2, r.ord_g3, r.ord_delta));
        }
        return Ok(Report::new(Header::new("fibers --dump-kodaira-table", cfg), kodaira_table_json(), csv));
    }
    let x = input::fibration(cfg)?;
    let fibers = x.singular_fibers()?;
    let euler: u32 = fibers.iter().map(|(_, k)| k.label.euler_number()).sum();
    let order = |o: Option<u32>| o.map_or("inf".to_string(), |v| v.to_string());
    let mut csv = String::from("s_re,s_im,t_re,t_im,label,ord_g2,ord_g3,ord_delta\n");
    let mut rows = Vec::with_capacity(fibers.len());
    for (p, k) in &fibers {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            point_csv(p),
            k.label,
            order(k.ord_g2),
            order(k.ord_g3),
            k.ord_delta
        ));
        rows.push(json!({
            "point": point_json(p),
            "label": k.label.to_string(),
            "ord_g2": k.ord_g2,
            "ord_g3": k.ord_g3,
            "ord_delta": k.ord_delta,
            "euler_number": k.label.euler_number(),
        }));
    }
    let result = json!({"fibers": rows, "euler_sum": euler});
    let mut report = Report::new(Header::new("fibers", cfg), result, csv);
    report.require(euler == 24, format!("Euler numbers sum to {euler}, expected 24"));
    Ok(report)
}

pub fn periods(cfg: &RunConfig, t: &str) -> Result<Report, CliError> {
    let x = input::fibration(cfg)?;
    let t = input::point(t)?;
    let chart = t.working_chart();
    let w = t.chart_coordinate(chart).expect("working chart contains the point");
    let curve = x.fiber_curve(&t)?;
    let lattice = x.fiber_lattice(&t)?;
    let g2 = eisenstein_g2(&lattice, cfg.tol_eis)?;
    let g3 = eisenstein_g3(&lattice, cfg.tol_eis)?;
    let scale = curve.g2.norm().max(curve.g3.norm());
    let roundtrip = (g2.value - curve.g2).norm().max((g3.value - curve.g3).norm()) / scale;
    let j = x.j_at(&t)?;
    log::debug!("periods at {t}: tau = {}", lattice.tau());
    let csv = complex_rows(&[
        ("g2", curve.g2),
        ("g3", curve.g3),
        ("omega1", lattice.omega1()),
        ("omega2", lattice.omega2()),
        ("tau", lattice.tau()),
        ("j", j),
        ("g2_lattice", g2.value),
        ("g3_lattice", g3.value),
        ("roundtrip_error", Complex64::new(roundtrip, 0.0)),
    ]);
    let result = json!({
        "point": point_json(&t),
        "chart": chart,
        "w": w,
        "curve": curve,
        "omega1": lattice.omega1(),
        "omega2": lattice.omega2(),
        "tau": lattice.tau(),
        "j": j,
        "eisenstein": {"g2": g2, "g3": g3},
        "roundtrip_error": roundtrip,
    });
    let mut report = Report::new(Header::new("periods", cfg), result, csv);
    report.require(
        roundtrip <= cfg.tol_roundtrip,
        format!("round-trip error {roundtrip:e} exceeds {:e}", cfg.tol_roundtrip),
    );
    Ok(report)
}

pub fn wp(cfg: &RunConfig, t: &str, z: &str) -> Result<Report, CliError> {
    let x = input::fibration(cfg)?;
    let t = input::point(t)?;
    let z = input::complex(z)?;
    let curve = x.fiber_curve(&t)?;
    let lattice = x.fiber_lattice(&t)?;
    let (p, dp) = wp_both(z, &lattice, cfg.tol_wp)?;
    let residual = (dp * dp - (4.0 * p * p * p - curve.g2 * p - curve.g3)).norm();
    let relative = residual / (1.0 + p.norm().powi(3));
    let csv = complex_rows(&[
        ("z", z),
        ("wp", p),
        ("wp_prime", dp),
        ("residual", Complex64::new(residual, 0.0)),
        ("relative_residual", Complex64::new(relative, 0.0)),
    ]);
    let result = json!({
        "point": point_json(&t),
        "chart": t.working_chart(),
        "curve": curve,
        "omega1": lattice.omega1(),
        "omega2": lattice.omega2(),
        "z": z,
        "wp": p,
        "wp_prime": dp,
        "residual": residual,
        "relative_residual": relative,
    });
    let mut report = Report::new(Header::new("wp", cfg), result, csv);
    report.require(
        relative <= cfg.tol_residual,
        format!("relative residual {relative:e} exceeds {:e}", cfg.tol_residual),
    );
    Ok(report)
}

pub fn certify(cfg: &RunConfig, t: &str, z: &str, rmin: f64, rmax: f64, rpoints: usize) -> Result<Report, CliError> {
    if !(rmin > 0.0 && rmin < rmax && rmax.is_finite()) || rpoints < 2 {
        return Err(CliError::invalid("need 0 < rmin < rmax and rpoints >= 2"));
    }
    let x = input::fibration(cfg)?;
    let t = input::point(t)?;
    let z = input::complex(z)?;
    let schedule = logspace(rmin, rmax, rpoints)?;
    let cert = vanishing_certificate(&x, z, &t, None, &schedule)?;
    log::debug!("certificate slope {}", cert.slope);
    let decreasing = cert.strictly_decreasing();
    let slope = cert.slope;
    let mut result = serde_json::to_value(&cert).expect("certificate serializes");
    result["schedule_parameters"] = json!({"rmin": rmin, "rmax": rmax, "points": rpoints, "spacing": "log"});
    let mut report = Report::new(Header::new("certify", cfg), result, cert.to_csv());
    report.require(decreasing, "bounds are not strictly decreasing");
    report.require(
        (slope + 1.0).abs() <= cfg.tol_slope,
        format!("slope {slope} differs from -1 by more than {:e}", cfg.tol_slope),
    );
    Ok(report)
}

fn lattice_input(cfg: &RunConfig) -> Result<IntegralLattice, CliError> {
    match &cfg.input {
        Some(path) => input::read_json(path),
        None => Ok(lattice_l()),
    }
}

pub fn lattice_sig(cfg: &RunConfig) -> Result<Report, CliError> {
    let l = lattice_input(cfg)?;
    let (pos, neg, zero) = l.inertia();
    let det = l.determinant().to_string();
    let csv = format!(
        "key,value\nrank,{}\npositive,{pos}\nnegative,{neg}\nzero,{zero}\ndeterminant,{det}\neven,{}\n",
        l.rank(),
        l.is_even()
    );
    let result = json!({
        "rank": l.rank(),
        "signature": if zero == 0 { json!([pos, neg]) } else { Value::Null },
        "inertia": {"positive": pos, "negative": neg, "zero": zero},
        "determinant": det,
        "even": l.is_even(),
        "unimodular": det == "1" || det == "-1",
    });
    Ok(Report::new(Header::new("lattice sig", cfg), result, csv))
}

pub fn lattice_ns(cfg: &RunConfig, tol: f64) -> Result<Report, CliError> {
    let Some(path) = &cfg.input else {
        return Err(CliError::new("missing_input", "lattice ns needs a period point via --input", 2));
    };
    let omega: PeriodPoint = input::read_json(path)?;
    let ns = neron_severi(&omega, tol)?;
    let (pos, neg, zero) = ns.lattice.inertia();
    let mut csv = String::from("basis_vector\n");
    for v in &ns.basis {
        let row: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        csv.push_str(&format!("\"{}\"\n", row.join(",")));
    }
    let result = json!({
        "quadric_residual": omega.quadric_residual(),
        "rank": ns.rank(),
        "inertia": {"positive": pos, "negative": neg, "zero": zero},
        "neron_severi": ns,
    });
    Ok(Report::new(Header::new("lattice ns", cfg), result, csv))
}

pub fn lattice_contains_u(cfg: &RunConfig, bound: i64) -> Result<Report, CliError> {
    if bound < 1 {
        return Err(CliError::invalid("--bound must be at least 1"));
    }
    let l = lattice_input(cfg)?;
    let search = contains_hyperbolic_plane(&l, bound);
    let mut result = json!({"rank": l.rank(), "bound": bound, "search": search});
    let mut csv = String::from("vector,coordinates\n");
    let mut failure = None;
    if let Some((e, f)) = search.plane() {
        let pairings = [l.pairing(e, e)?, l.pairing(f, f)?, l.pairing(e, f)?];
        if pairings != [0, 0, 1] {
            failure = Some(format!("pairings {pairings:?} are not (0, 0, 1)"));
        }
        result["pairings"] = json!({"ee": pairings[0], "ff": pairings[1], "ef": pairings[2]});
        for (name, v) in [("e", e), ("f", f)] {
            let row: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            csv.push_str(&format!("{name},\"{}\"\n", row.join(",")));
        }
    }
    let mut report = Report::new(Header::new("lattice contains-u", cfg), result, csv);
    if let Some(f) = failure {
        report.require(false, f);
    }
    Ok(report)
}
