use crate::math::Vec2;

/// Revolute joint between two bodies with a velocity motor and angle limits.
///
/// The joint angle is `body_b.angle - body_a.angle - reference_angle`, so a
/// freshly assembled chain reads zero when `reference_angle` captures the
/// assembly pose offset. The motor drives the relative angular velocity to
/// the commanded value with unbounded force within one substep; commands are
/// saturated at `max_motor_velocity`.
#[derive(Debug, Clone)]
pub struct RevoluteJoint {
    pub body_a: usize,
    pub body_b: usize,
    /// Anchor in body-a local frame.
    pub anchor_a: Vec2,
    /// Anchor in body-b local frame.
    pub anchor_b: Vec2,
    /// (lo, hi) joint angle limits, radians, lo < hi.
    pub angle_limits: (f64, f64),
    pub max_motor_velocity: f64,
    pub motor_enabled: bool,
    pub reference_angle: f64,
    /// Last saturated motor command, rad/s.
    pub motor_velocity_command: f64,
    /// Joint angle after the most recent step.
    pub current_angle: f64,
}

impl RevoluteJoint {
    pub fn new(
        body_a: usize,
        body_b: usize,
        anchor_a: Vec2,
        anchor_b: Vec2,
        angle_limits: (f64, f64),
        max_motor_velocity: f64,
    ) -> Self {
        assert!(angle_limits.0 < angle_limits.1, "limits must be ordered");
        Self {
            body_a,
            body_b,
            anchor_a,
            anchor_b,
            angle_limits,
            max_motor_velocity,
            motor_enabled: true,
            reference_angle: 0.0,
            motor_velocity_command: 0.0,
            current_angle: 0.0,
        }
    }

    pub fn passive(mut self) -> Self {
        self.motor_enabled = false;
        self
    }
}
