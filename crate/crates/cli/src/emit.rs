use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use badweave::exact::{Exp, PowerProduct, QuadraticSurd, Rat};
use badweave::lines::Pair;
use badweave::transference::{dist_to_int, dual_defect, max_term};
use serde_json::{json, Value};

use crate::Failure;

/// Serialized JSON-lines sink; stdout when no path is given.
pub struct Sink(Box<dyn Write>);

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, Failure> {
        Ok(Sink(match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::io(p, e))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        }))
    }

    pub fn line(&mut self, v: &Value) -> Result<(), Failure> {
        writeln!(self.0, "{v}").map_err(|e| Failure::Io(e.to_string()))
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        self.0.flush().map_err(|e| Failure::Io(e.to_string()))
    }
}

pub fn rat(r: &Rat) -> Value {
    json!(r.to_string())
}

fn split(r: &Rat) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

/// Exact value when rational, otherwise a dyadic upper bound at `2^−64`.
fn value_bound(p: &PowerProduct, s: &QuadraticSurd) -> Rat {
    match (p.to_rational(), s.to_rational()) {
        (Some(a), Some(b)) => a * b,
        _ => p.upper_bound(64) * s.enclose(64).1,
    }
}

/// `{"kind":"dual", …}` with value `max{|A|^{1/i}, |B|^{1/j}}·‖Ax − By‖`.
pub fn dual_witness(a: i64, b: i64, x: &QuadraticSurd, y: &QuadraticSurd, pair: &Pair) -> Value {
    let m = max_term(a, b, pair).unwrap_or_else(PowerProduct::one);
    let d = dual_defect(x, y, a, b).expect("compatible radicands");
    let v = if d.is_zero() {
        Rat::from_integer(0.into())
    } else {
        value_bound(&m, &d)
    };
    let (n, den) = split(&v);
    json!({"kind": "dual", "q": null, "A": a, "B": b, "value_num": n, "value_den": den})
}

/// `{"kind":"simultaneous", …}` with value `q·max{‖qx‖^{1/i}, ‖qy‖^{1/j}}`.
pub fn simultaneous_witness(q: u64, x: &QuadraticSurd, y: &QuadraticSurd, pair: &Pair) -> Value {
    let qb = num_bigint::BigInt::from(q);
    let side = |v: &QuadraticSurd, w: Exp| -> Rat {
        let d = dist_to_int(&v.mul_int(&qb));
        if *w.numer() == 0 || d.is_zero() {
            return Rat::from_integer(0.into());
        }
        match d.to_rational() {
            Some(r) => {
                let p = PowerProduct::single(r, w.recip());
                p.to_rational().unwrap_or_else(|| p.upper_bound(64))
            }
            None => PowerProduct::single(d.enclose(64).1, w.recip()).upper_bound(64),
        }
    };
    let v = side(x, pair.i()).max(side(y, pair.j())) * Rat::from_integer(qb.clone());
    let (n, den) = split(&v);
    json!({"kind": "simultaneous", "q": q, "A": null, "B": null, "value_num": n, "value_den": den})
}
