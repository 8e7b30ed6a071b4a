//! JSON output construction. Floating values are serialized with 17
//! significant digits so outputs round-trip exactly and reruns are
//! byte-identical.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use pba_core::cells::{CellDecomposition, CellKind};
use pba_core::scalar::format_rat;
use pba_core::special::SpecialReport;
use pba_core::spectral::{IdempotentData, PFData};
use pba_core::structure::RadicalBasis;
use pba_core::verify::BatteryReport;
use pba_core::PBAlgebra;

/// 17 significant digits, kept verbatim through `arbitrary_precision`.
pub fn float(x: f64) -> Value {
    let formatted = format!("{:.16e}", x);
    match Number::from_str(&formatted) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(formatted), // non-finite values
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn cells_json(alg: &PBAlgebra, cd: &CellDecomposition) -> Value {
    let kind_json = |kind: CellKind| -> Value {
        let cells: Vec<Value> = cd
            .cells(kind)
            .iter()
            .enumerate()
            .map(|(id, members)| {
                json!({
                    "id": id,
                    "members": members,
                    "labels": members.iter().map(|&i| alg.label(i)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<Value> = cd
            .dag_edges(kind)
            .iter()
            .map(|&(a, b)| json!([a, b]))
            .collect();
        json!({ "cells": cells, "order_edges": edges })
    };
    json!({
        "dim": alg.dim(),
        "left": kind_json(CellKind::Left),
        "right": kind_json(CellKind::Right),
        "two_sided": kind_json(CellKind::TwoSided),
    })
}

pub fn pf_json(left_cell: usize, coeffs: &[pba_core::Rat], pf: &PFData) -> Value {
    json!({
        "left_cell": left_cell,
        "coeffs": coeffs.iter().map(format_rat).collect::<Vec<_>>(),
        "lambda": float(pf.lambda),
        "v": floats(&pf.v),
        "v_hat": floats(&pf.v_hat),
        "residual_right": float(pf.residual_right),
        "residual_left": float(pf.residual_left),
        "iterations": pf.iterations,
    })
}

pub fn idempotent_json(alg: &PBAlgebra, data: &IdempotentData) -> Value {
    let coefficients: Vec<Value> = data
        .coefficients
        .iter()
        .map(|&(index, value)| {
            json!({
                "index": index,
                "label": alg.label(index),
                "value": float(value),
            })
        })
        .collect();
    json!({
        "two_sided_cell": data.two_sided_cell,
        "left_cell": data.left_cell,
        "lambda": float(data.lambda),
        "coefficients": coefficients,
        "idempotency_residual": float(data.idempotency_residual),
        "positivity_margin": float(data.positivity_margin),
        "squarings": data.squarings,
    })
}

pub fn radical_json(rad: &RadicalBasis) -> Value {
    json!({
        "dim": rad.dim(),
        "basis": rad
            .rows()
            .iter()
            .map(|row| row.iter().map(format_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn special_json(report: &SpecialReport) -> Value {
    json!({
        "left_cell": report.left_cell,
        "apex": report.apex,
        "lambda": float(report.lambda),
        "dim": report.dim,
        "character": floats(&report.character.traces),
        "c_samples": report
            .c_samples
            .iter()
            .map(|c| c.iter().map(format_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn battery_json(report: &BatteryReport) -> Value {
    let mut root = Map::new();
    root.insert("passed".into(), Value::Bool(report.passed()));
    root.insert("failures".into(), json!(report.failures()));
    root.insert(
        "checks".into(),
        serde_json::to_value(&report.checks).expect("check list serializes"),
    );
    Value::Object(root)
}
