/// Fixed 41-feature observation layout:
///
/// | index  | feature                                              |
/// |--------|------------------------------------------------------|
/// | 0..=5  | joint angles: l_hip, l_knee, l_ankle, r_hip, r_knee, r_ankle (rad) |
/// | 6      | general counter (seconds since episode start)        |
/// | 7..=8  | left/right foot counter (seconds since last ground touch) |
/// | 9      | torso height (m)                                     |
/// | 10     | torso pitch (rad)                                    |
/// | 11     | center-of-mass x minus torso x (m)                   |
/// | 12     | center-of-mass z (m)                                 |
/// | 13     | torso angular velocity (rad/s)                       |
/// | 14..=15| torso linear acceleration x, z (m/s^2, finite-differenced) |
/// | 16..=18| left foot Fx/100, Fz/100 (N/100), CoP offset (m)     |
/// | 19..=21| right foot Fx/100, Fz/100, CoP offset                |
/// | 22..=40| per-cycle rate of change of features 0..=5 and 9..=21 |
pub const OBS_DIM: usize = 41;

/// Base features differenced into slots 22..=40: everything except the
/// three counters.
pub const RATE_BASE_INDICES: [usize; 19] = [
    0, 1, 2, 3, 4, 5, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21,
];

pub const IDX_GENERAL_COUNTER: usize = 6;
pub const IDX_LEFT_FOOT_COUNTER: usize = 7;
pub const IDX_RIGHT_FOOT_COUNTER: usize = 8;
pub const IDX_TORSO_HEIGHT: usize = 9;
pub const IDX_TORSO_PITCH: usize = 10;
pub const IDX_RATE_START: usize = 22;

/// Pressure-force channels are divided by this to stay O(1).
pub const FORCE_SCALE: f64 = 100.0;

pub type Observation = Vec<f64>;

/// Fills slots 22..=40 from the current and previous base features.
pub fn fill_rates(features: &mut [f64], previous: &[f64], control_dt: f64) {
    for (k, &base) in RATE_BASE_INDICES.iter().enumerate() {
        features[IDX_RATE_START + k] = (features[base] - previous[base]) / control_dt;
    }
}
