use std::collections::BTreeMap;

use crate::sexpr::SExpr;
use crate::{Error, Result};

/// One foot's force-resistance reading: contact origin and force vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FootContact {
    pub origin: [f64; 3],
    pub force: [f64; 3],
}

/// Decoded perceptor message. Joint angles are converted from the wire's
/// degrees to radians at this boundary; everything downstream is radians.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerceptorFrame {
    pub sim_time: Option<f64>,
    pub joint_angles: BTreeMap<String, f64>,
    pub gyro: Option<[f64; 3]>,
    pub accelerometer: Option<[f64; 3]>,
    /// Keyed by foot name (`lf` / `rf`); absent feet are airborne.
    pub foot_contacts: BTreeMap<String, FootContact>,
}

fn malformed(node: &str, reason: impl Into<String>) -> Error {
    Error::MalformedNode {
        node: node.to_string(),
        reason: reason.into(),
    }
}

/// Finds the child list `(key a b c ...)` and returns its value atoms.
fn named_values<'a>(items: &'a [SExpr], key: &str, node: &str) -> Result<Option<Vec<&'a str>>> {
    for item in items {
        if item.head() == Some(key) {
            let list = item.as_list().expect("head implies list");
            let mut values = Vec::with_capacity(list.len() - 1);
            for v in &list[1..] {
                values.push(
                    v.as_atom()
                        .ok_or_else(|| malformed(node, format!("{key} holds a non-atom")))?,
                );
            }
            return Ok(Some(values));
        }
    }
    Ok(None)
}

fn required_floats<const N: usize>(items: &[SExpr], key: &str, node: &str) -> Result<[f64; N]> {
    let values = named_values(items, key, node)?
        .ok_or_else(|| malformed(node, format!("missing ({key} ...)")))?;
    if values.len() != N {
        return Err(malformed(node, format!("{key} expects {N} values")));
    }
    let mut out = [0.0; N];
    for (slot, text) in out.iter_mut().zip(&values) {
        *slot = text
            .parse()
            .map_err(|_| malformed(node, format!("bad number {text:?} in {key}")))?;
    }
    Ok(out)
}

fn required_name(items: &[SExpr], node: &str) -> Result<String> {
    let values = named_values(items, "n", node)?
        .ok_or_else(|| malformed(node, "missing (n ...)"))?;
    match values.as_slice() {
        [name] => Ok((*name).to_string()),
        _ => Err(malformed(node, "n expects one value")),
    }
}

/// Extracts HJ, GYR, ACC, FRP, and time nodes from one server message.
/// Unknown nodes are skipped without error.
pub fn decode_perceptors(message: &[SExpr]) -> Result<PerceptorFrame> {
    let mut frame = PerceptorFrame::default();
    for node in message {
        let Some(head) = node.head() else {
            continue;
        };
        let items = node.as_list().expect("head implies list");
        match head {
            "time" => {
                let [now] = required_floats::<1>(&items[1..], "now", "time")?;
                frame.sim_time = Some(now);
            }
            "HJ" => {
                let name = required_name(&items[1..], "HJ")?;
                let [degrees] = required_floats::<1>(&items[1..], "ax", "HJ")?;
                frame.joint_angles.insert(name, degrees.to_radians());
            }
            "GYR" => {
                frame.gyro = Some(required_floats::<3>(&items[1..], "rt", "GYR")?);
            }
            "ACC" => {
                frame.accelerometer = Some(required_floats::<3>(&items[1..], "a", "ACC")?);
            }
            "FRP" => {
                let name = required_name(&items[1..], "FRP")?;
                let origin = required_floats::<3>(&items[1..], "c", "FRP")?;
                let force = required_floats::<3>(&items[1..], "f", "FRP")?;
                frame.foot_contacts.insert(name, FootContact { origin, force });
            }
            _ => {}
        }
    }
    Ok(frame)
}
