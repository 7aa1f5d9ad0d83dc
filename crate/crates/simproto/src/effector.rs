use std::collections::BTreeMap;

use crate::sexpr::SExpr;
use crate::{Error, Result};

/// Per-joint angular velocity commands, rad/s. Ordered map so encoding is
/// stable under repetition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EffectorCommand {
    pub velocities: BTreeMap<String, f64>,
}

impl EffectorCommand {
    pub fn set(&mut self, effector: &str, velocity: f64) {
        self.velocities.insert(effector.to_string(), velocity);
    }
}

/// Encodes one expression per joint, `(<effector-name> <velocity>)`, with
/// fixed 6-decimal formatting.
pub fn encode_effectors(cmd: &EffectorCommand) -> Result<String> {
    let mut out = String::new();
    for (name, velocity) in &cmd.velocities {
        if !velocity.is_finite() {
            return Err(Error::NonFiniteVelocity(name.clone()));
        }
        out.push_str(&format!("({name} {velocity:.6})"));
    }
    Ok(out)
}

/// Inverse of `encode_effectors` over a parsed message.
pub fn decode_effectors(message: &[SExpr]) -> Result<EffectorCommand> {
    let mut cmd = EffectorCommand::default();
    for node in message {
        let items = node.as_list().ok_or_else(|| Error::MalformedNode {
            node: "effector".into(),
            reason: "top-level atom".into(),
        })?;
        match items {
            [SExpr::Atom(name), SExpr::Atom(value)] => {
                let velocity = value.parse().map_err(|_| Error::MalformedNode {
                    node: name.clone(),
                    reason: format!("bad velocity {value:?}"),
                })?;
                cmd.velocities.insert(name.clone(), velocity);
            }
            _ => {
                return Err(Error::MalformedNode {
                    node: "effector".into(),
                    reason: "expected (name velocity)".into(),
                })
            }
        }
    }
    Ok(cmd)
}
