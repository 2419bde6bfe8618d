//! Schema-versioned JSON documents for zero reports and verdicts.

use eiszero::zero_locator::{Verdicts, ZeroReport};
use serde_json::{json, Value};

pub const SCHEMA: &str = "eiszero.report";
pub const SCHEMA_VERSION: u32 = 1;

fn verdicts(v: &Verdicts) -> Value {
    json!({
        "bound_halfline": v.bound_halfline,
        "bound_interval": v.bound_interval,
        "deg_p": v.deg_p,
        "off_halfline_count": v.off_halfline_count,
        "off_interval_count": v.off_interval_count,
        "off_lower_count": v.off_lower_count,
        "m_halfline": v.m_halfline,
        "m_halfline_without_cusps": v.m_halfline_without_cusps,
        "m_lower": v.m_lower,
        "m_lower_without_cusps": v.m_lower_without_cusps,
        "halfline": v.verdict_11prime,
        "interval": v.verdict_12,
        "lower": v.verdict_31,
    })
}

pub fn report(r: &ZeroReport) -> Value {
    let zeros: Vec<Value> = r
        .zeros
        .iter()
        .map(|z| {
            let (x, y) = z.z_f64();
            let (jr, ji) = z.j_f64();
            json!({
                "z": [x, y],
                "j": [jr, ji],
                "multiplicity": z.multiplicity,
                "on_arc": z.on_arc,
                "arc_distance": z.arc_distance,
                "j_real": z.j_real,
                "in_interval": z.in_interval.label(),
                "kind": z.kind.to_string(),
            })
        })
        .collect();
    let cusps: Vec<Value> = r
        .cusps
        .iter()
        .map(|c| {
            let j = c.j.to_f64();
            json!({"class": c.class, "width": c.width.to_string(), "order": c.order, "j": [j.re, j.im]})
        })
        .collect();
    json!({
        "group": r.group,
        "weight": r.weight,
        "precision": r.precision,
        "acceptable": r.acceptable,
        "a0": r.a0,
        "a1": r.a1,
        "c": r.c,
        "s1": r.s1,
        "valence_expected": r.valence_expected.to_string(),
        "valence_found": r.valence_found.to_string(),
        "tolerances": {"delta_geom": r.tolerances.delta_geom, "delta_imag": r.tolerances.delta_imag},
        "off_arc_count": r.off_arc_count(),
        "max_off_arc_distance": r.max_off_arc_distance(),
        "verdicts": r.verdicts.as_ref().map(verdicts),
        "asserted": r.asserted(),
        "zeros": zeros,
        "cusps": cusps,
    })
}

pub fn document(command: &str, reports: &[&ZeroReport]) -> Value {
    json!({
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "reports": reports.iter().map(|r| report(r)).collect::<Vec<_>>(),
    })
}
