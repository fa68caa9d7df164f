//! CSV and JSON rendering with full-precision floats.
//!
//! Every float is written with 17 significant digits so that parsing the
//! output reproduces the exact bit pattern that was computed.

use std::io;

use serde::Serialize;

use crate::continuous::ContinuousTrajectory;
use crate::simulate::Trajectory;

/// 17-significant-digit rendering of a float (`{:.16e}`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes any value to JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::with_capacity(256);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

fn csv_rows<I>(header_time: &str, times: I, states: &[crate::StateVector]) -> String
where
    I: Iterator<Item = String>,
{
    let k = states.first().map_or(0, crate::StateVector::len);
    let mut out = String::new();
    out.push_str(header_time);
    for i in 1..=k {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    for (t, state) in times.zip(states) {
        out.push_str(&t);
        for v in state.iter() {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Discrete trajectory CSV: header `t,x1,...,xk`, one row per step.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    csv_rows(
        "t",
        (0..traj.states().len()).map(|t| t.to_string()),
        traj.states(),
    )
}

/// Continuous trajectory CSV: header `time,x1,...,xk`.
pub fn continuous_csv(traj: &ContinuousTrajectory) -> String {
    csv_rows(
        "time",
        traj.times().iter().map(|t| fmt_f64(*t)),
        traj.states(),
    )
}

/// Counterexample sequence CSV: header `n,u,v`, 1-based index.
pub fn sequences_csv(u: &[f64], v: &[f64]) -> String {
    let mut out = String::from("n,u,v\n");
    for (i, (ui, vi)) in u.iter().zip(v).enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, fmt_f64(*ui), fmt_f64(*vi)));
    }
    out
}
