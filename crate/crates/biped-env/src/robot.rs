use physics2d::{Body, RevoluteJoint, Vec2, WorldState};

use crate::config::BipedConfig;

/// Total robot mass, kg.
pub const TOTAL_MASS: f64 = 4.5;

/// Body order: torso, then left thigh/shank/foot, then right.
pub const BODY_TORSO: usize = 0;
pub const FOOT_BODIES: [usize; 2] = [3, 6];

/// Joint order matches the observation and action layouts.
pub const JOINT_NAMES: [&str; 6] = [
    "l_hip", "l_knee", "l_ankle", "r_hip", "r_knee", "r_ankle",
];

pub const HIP_LIMITS: (f64, f64) = (-1.9, 0.7);
pub const KNEE_LIMITS: (f64, f64) = (0.0, 2.1);
pub const ANKLE_LIMITS: (f64, f64) = (-1.2, 0.9);
pub const MAX_MOTOR_VELOCITY: f64 = 6.14;

/// Declared crouch pose: (hip, knee, ankle) per leg. The ankle cancels the
/// thigh/knee tilt so the feet sit flat.
pub const CROUCH_POSE: [f64; 3] = [-0.3, 0.6, -0.3];

/// Segment geometry shared by assembly and the kinematics tests.
pub struct BipedLayout {
    pub torso_half: Vec2,
    pub torso_mass: f64,
    pub thigh_half: Vec2,
    pub thigh_mass: f64,
    pub shank_half: Vec2,
    pub shank_mass: f64,
    pub foot_half: Vec2,
    pub foot_mass: f64,
    /// Ankle anchor in the foot frame. The offset places the foot center
    /// directly under the crouch-pose center of mass so the reset stance is
    /// statically balanced.
    pub ankle_in_foot: Vec2,
}

impl Default for BipedLayout {
    fn default() -> Self {
        Self {
            torso_half: Vec2::new(0.04, 0.10),
            torso_mass: 2.0,
            thigh_half: Vec2::new(0.02, 0.07),
            thigh_mass: 0.6,
            shank_half: Vec2::new(0.02, 0.07),
            shank_mass: 0.45,
            foot_half: Vec2::new(0.04, 0.01),
            foot_mass: 0.2,
            ankle_in_foot: Vec2::new(0.0106, 0.01),
        }
    }
}

/// Builds the biped at `config.start_x` in the given pose (angles per leg:
/// hip, knee, ankle), feet resting exactly on the ground. Joint order:
/// l_hip, l_knee, l_ankle, r_hip, r_knee, r_ankle.
pub fn assemble_biped(config: &BipedConfig, pose: &[[f64; 3]; 2]) -> WorldState {
    let layout = BipedLayout::default();
    let x0 = config.start_x;
    // Provisional torso height; everything shifts onto the ground below.
    let torso_center = Vec2::new(x0, 1.0);

    let mut torso = Body::rectangle(layout.torso_mass, layout.torso_half, torso_center);
    torso.angle = 0.0;

    let mut bodies = vec![torso];
    let mut joints = Vec::new();

    for &[hip_q, knee_q, ankle_q] in pose {
        let torso_angle = 0.0;
        let hip_anchor_torso = Vec2::new(0.0, -layout.torso_half.z);
        let hip_world = torso_center + hip_anchor_torso.rotated(torso_angle);

        let thigh_angle = torso_angle + hip_q;
        let thigh_top = Vec2::new(0.0, layout.thigh_half.z);
        let thigh_center = hip_world - thigh_top.rotated(thigh_angle);
        let mut thigh = Body::rectangle(layout.thigh_mass, layout.thigh_half, thigh_center);
        thigh.angle = thigh_angle;

        let knee_world = thigh_center + Vec2::new(0.0, -layout.thigh_half.z).rotated(thigh_angle);
        let shank_angle = thigh_angle + knee_q;
        let shank_top = Vec2::new(0.0, layout.shank_half.z);
        let shank_center = knee_world - shank_top.rotated(shank_angle);
        let mut shank = Body::rectangle(layout.shank_mass, layout.shank_half, shank_center);
        shank.angle = shank_angle;

        let ankle_world = shank_center + Vec2::new(0.0, -layout.shank_half.z).rotated(shank_angle);
        let foot_angle = shank_angle + ankle_q;
        let foot_center = ankle_world - layout.ankle_in_foot.rotated(foot_angle);
        let mut foot = Body::rectangle(layout.foot_mass, layout.foot_half, foot_center);
        foot.angle = foot_angle;

        let thigh_idx = bodies.len();
        bodies.push(thigh);
        let shank_idx = bodies.len();
        bodies.push(shank);
        let foot_idx = bodies.len();
        bodies.push(foot);

        joints.push(RevoluteJoint::new(
            BODY_TORSO,
            thigh_idx,
            hip_anchor_torso,
            thigh_top,
            HIP_LIMITS,
            MAX_MOTOR_VELOCITY,
        ));
        joints.push(RevoluteJoint::new(
            thigh_idx,
            shank_idx,
            Vec2::new(0.0, -layout.thigh_half.z),
            shank_top,
            KNEE_LIMITS,
            MAX_MOTOR_VELOCITY,
        ));
        joints.push(RevoluteJoint::new(
            shank_idx,
            foot_idx,
            Vec2::new(0.0, -layout.shank_half.z),
            layout.ankle_in_foot,
            ANKLE_LIMITS,
            MAX_MOTOR_VELOCITY,
        ));
    }

    // Left and right joints interleave as l_hip..l_ankle then r_hip..r_ankle
    // by construction; drop every body onto the ground.
    let lowest = bodies
        .iter()
        .flat_map(|b| b.corners())
        .map(|c| c.z)
        .fold(f64::INFINITY, f64::min);
    for b in &mut bodies {
        b.position.z -= lowest;
    }

    let mut world = WorldState::new(bodies, joints);
    world.friction = config.physics.friction;
    world.gravity = Vec2::new(0.0, config.physics.gravity_z);
    // Capture the assembled pose as each joint's current angle.
    for j in 0..world.joints.len() {
        world.joints[j].current_angle = world.joint_angle(j);
    }
    world
}

pub fn joint_limits(joint: usize) -> (f64, f64) {
    match joint % 3 {
        0 => HIP_LIMITS,
        1 => KNEE_LIMITS,
        _ => ANKLE_LIMITS,
    }
}
