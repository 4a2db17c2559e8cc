//! JSON records for the `path` command.
//!
//! Multidegrees are 3-arrays, with `"-inf"` for the zero polynomial.
//! Polynomials are strings in the expression syntax; `P` uses `y, z` for
//! the two entries of the center representative.

use serde_json::{json, Value};

use crate::complex::{Point, Vertex3, VertexDegrees};
use crate::poly::MultiDegree;
use crate::reduction::{PathError, ReductionPath, ReductionStep};

pub fn mdeg(d: &MultiDegree) -> Value {
    match d {
        MultiDegree::NegInfinity => json!("-inf"),
        MultiDegree::Finite(e) => json!(e.0),
    }
}

pub fn degrees(d: &VertexDegrees) -> Value {
    json!({
        "stratified": d.stratified.iter().map(mdeg).collect::<Vec<_>>(),
        "total": mdeg(&d.total),
        "top": mdeg(&d.top),
    })
}

pub fn vertex(v: &Vertex3) -> Value {
    json!({
        "components": v.rep().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "degrees": degrees(&v.degrees()),
    })
}

fn point(p: &Point) -> Value {
    json!(p.rep().to_string())
}

pub fn step(s: &ReductionStep) -> Value {
    json!({
        "kind": s.kind.as_str(),
        "source": vertex(&s.source),
        "target": vertex(&s.target),
        "center": s.center.rep().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "pivot": point(&s.pivot),
        "P": s.data.to_string(),
        "auxiliary": s.auxiliary.as_ref().map(vertex),
    })
}

fn path_body(p: &ReductionPath) -> (Value, Value) {
    (Value::Array(p.steps.iter().map(step).collect()), vertex(&p.terminal))
}

/// One object with `input`, `status`, `steps`, `terminal` and `degrees`.
pub fn path_record(input: &Vertex3, result: &Result<ReductionPath, PathError>) -> Value {
    let (status, body) = match result {
        Ok(p) => ("complete", Some(path_body(p))),
        Err(PathError::NonReducible { partial, .. }) => ("non-reducible", Some(path_body(partial))),
        Err(PathError::BudgetExceeded { partial, .. }) => ("budget-exceeded", Some(path_body(partial))),
        Err(PathError::Invalid(_)) => ("invalid", None),
    };
    let (steps, terminal) = body.unwrap_or((json!([]), Value::Null));
    json!({
        "input": input.rep().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "status": status,
        "steps": steps,
        "terminal": terminal,
        "degrees": degrees(&input.degrees()),
    })
}
