use crate::body::Body;
use crate::joint::RevoluteJoint;
use crate::math::Vec2;
use crate::{Error, Result};

/// Recommended substep; the control layer runs 4 of these per 20 ms cycle.
pub const SUBSTEP_DT: f64 = 0.005;
pub const VELOCITY_ITERATIONS: usize = 10;
pub const BAUMGARTE: f64 = 0.2;
pub const PENETRATION_SLOP: f64 = 1e-3;

/// One resolved ground contact of the most recent substep.
#[derive(Debug, Clone)]
pub struct Contact {
    pub body: usize,
    /// World-space contact point.
    pub point: Vec2,
    /// Contact x in the body frame, for center-of-pressure readout.
    pub local_x: f64,
    /// Accumulated normal impulse, N*s (>= 0).
    pub normal_impulse: f64,
    /// Accumulated tangent impulse, N*s.
    pub tangent_impulse: f64,
}

/// Force and center of pressure reported by a foot over one control cycle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FootPressure {
    pub force: Vec2,
    pub center_of_pressure_x: f64,
}

/// Planar world: bodies, joints, gravity, and the ground plane at z = 0.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub bodies: Vec<Body>,
    pub joints: Vec<RevoluteJoint>,
    pub gravity: Vec2,
    pub friction: f64,
    /// Contacts resolved in the most recent substep.
    pub contacts: Vec<Contact>,
    /// Contacts accumulated since `begin_cycle`, for pressure readouts.
    pub cycle_contacts: Vec<Contact>,
    /// Warm-start caches carried across substeps. Persistent impulses make
    /// the articulated chain converge within the fixed iteration budget.
    joint_cache: Vec<JointImpulses>,
    contact_cache: Vec<ContactKey>,
}

#[derive(Debug, Clone, Copy, Default)]
struct JointImpulses {
    point: Vec2,
    motor: f64,
}

#[derive(Debug, Clone, Copy)]
struct ContactKey {
    body: usize,
    corner: usize,
    normal_impulse: f64,
    tangent_impulse: f64,
}

struct ContactConstraint {
    body: usize,
    corner: usize,
    r: Vec2,
    local_x: f64,
    point: Vec2,
    penetration: f64,
    inv_kn: f64,
    inv_kt: f64,
    normal_impulse: f64,
    tangent_impulse: f64,
}

struct JointConstraint {
    a: usize,
    b: usize,
    ra: Vec2,
    rb: Vec2,
    // Inverse of the 2x2 effective-mass matrix of the point constraint.
    inv_k: [f64; 4],
    position_error: Vec2,
    inv_kw: f64,
    motor_target: Option<f64>,
    rel_omega_start: f64,
    angle: f64,
    lo: f64,
    hi: f64,
    point_impulse: Vec2,
    motor_impulse: f64,
    lo_impulse: f64,
    hi_impulse: f64,
}

impl WorldState {
    pub fn new(bodies: Vec<Body>, joints: Vec<RevoluteJoint>) -> Self {
        let joint_count = joints.len();
        Self {
            bodies,
            joints,
            gravity: Vec2::new(0.0, -9.81),
            friction: 1.0,
            contacts: Vec::new(),
            cycle_contacts: Vec::new(),
            joint_cache: vec![JointImpulses::default(); joint_count],
            contact_cache: Vec::new(),
        }
    }

    /// Clears the per-cycle contact accumulator; the control layer calls
    /// this once per 20 ms cycle before its 4 substeps.
    pub fn begin_cycle(&mut self) {
        self.cycle_contacts.clear();
    }

    pub fn joint_angle(&self, j: usize) -> f64 {
        let joint = &self.joints[j];
        (self.bodies[joint.body_b].angle - self.bodies[joint.body_a].angle)
            - joint.reference_angle
    }

    /// Mass-weighted mean of body positions.
    pub fn center_of_mass(&self) -> Vec2 {
        let mut total = 0.0;
        let mut acc = Vec2::ZERO;
        for b in &self.bodies {
            acc += b.position * b.mass;
            total += b.mass;
        }
        acc * (1.0 / total)
    }

    pub fn total_kinetic_energy(&self) -> f64 {
        self.bodies.iter().map(Body::kinetic_energy).sum()
    }

    /// Pure transition: returns the stepped world.
    pub fn step(&self, dt: f64, motor_commands: &[f64]) -> Result<WorldState> {
        let mut next = self.clone();
        next.step_in_place(dt, motor_commands)?;
        Ok(next)
    }

    /// In-place variant of `step` for owners that hold the world by value.
    pub fn step_in_place(&mut self, dt: f64, motor_commands: &[f64]) -> Result<()> {
        if motor_commands.len() != self.joints.len() {
            return Err(Error::CommandCount {
                expected: self.joints.len(),
                got: motor_commands.len(),
            });
        }

        let start_linear: Vec<Vec2> = self.bodies.iter().map(|b| b.linear_velocity).collect();
        let start_angular: Vec<f64> = self.bodies.iter().map(|b| b.angular_velocity).collect();

        // Gravity kick.
        for b in &mut self.bodies {
            if !b.is_static {
                b.linear_velocity += self.gravity * dt;
            }
        }

        let mut contacts = self.collect_contacts();
        let mut joints = self.prepare_joints(motor_commands, &start_angular, dt);

        // Warm start: re-apply the previous substep's impulses so the fixed
        // iteration budget refines an already-consistent solution.
        for (j, jc) in joints.iter_mut().enumerate() {
            let cache = self.joint_cache[j];
            jc.point_impulse = cache.point;
            self.bodies[jc.a].apply_impulse(-cache.point, jc.ra);
            self.bodies[jc.b].apply_impulse(cache.point, jc.rb);
            if jc.motor_target.is_some() {
                jc.motor_impulse = cache.motor;
                self.apply_angular_impulse(jc.a, jc.b, cache.motor);
            }
        }
        for cc in &mut contacts {
            if let Some(cached) = self
                .contact_cache
                .iter()
                .find(|k| k.body == cc.body && k.corner == cc.corner)
            {
                cc.normal_impulse = cached.normal_impulse;
                cc.tangent_impulse = cached.tangent_impulse;
                self.bodies[cc.body].apply_impulse(
                    Vec2::new(cached.tangent_impulse, cached.normal_impulse),
                    cc.r,
                );
            }
        }

        for _ in 0..VELOCITY_ITERATIONS {
            for jc in &mut joints {
                self.solve_joint_point(jc, dt);
                self.solve_joint_motor(jc);
                self.solve_joint_limits(jc, dt);
            }
            for cc in &mut contacts {
                self.solve_contact(cc, dt);
            }
        }

        // Trapezoidal position update: exact for constant acceleration and
        // drift-free for resting contact.
        for (i, b) in self.bodies.iter_mut().enumerate() {
            if b.is_static {
                continue;
            }
            b.position += (start_linear[i] + b.linear_velocity) * (0.5 * dt);
            b.angle += (start_angular[i] + b.angular_velocity) * (0.5 * dt);
        }

        self.joint_cache = joints
            .iter()
            .map(|jc| JointImpulses {
                point: jc.point_impulse,
                motor: jc.motor_impulse,
            })
            .collect();
        self.contact_cache = contacts
            .iter()
            .map(|cc| ContactKey {
                body: cc.body,
                corner: cc.corner,
                normal_impulse: cc.normal_impulse,
                tangent_impulse: cc.tangent_impulse,
            })
            .collect();

        self.contacts = contacts
            .iter()
            .map(|c| Contact {
                body: c.body,
                point: c.point,
                local_x: c.local_x,
                normal_impulse: c.normal_impulse,
                tangent_impulse: c.tangent_impulse,
            })
            .collect();
        self.cycle_contacts.extend(self.contacts.iter().cloned());

        for (j, cmd) in motor_commands.iter().enumerate() {
            let max = self.joints[j].max_motor_velocity;
            self.joints[j].motor_velocity_command = cmd.clamp(-max, max);
            self.joints[j].current_angle = self.joint_angle(j);
        }

        if let Some(snapshot) = self.non_finite_snapshot() {
            return Err(Error::NonFinite(snapshot));
        }
        Ok(())
    }

    fn collect_contacts(&self) -> Vec<ContactConstraint> {
        let mut out = Vec::new();
        for (i, b) in self.bodies.iter().enumerate() {
            if b.is_static {
                continue;
            }
            let h = b.half_extents;
            let locals = [
                Vec2::new(h.x, h.z),
                Vec2::new(-h.x, h.z),
                Vec2::new(-h.x, -h.z),
                Vec2::new(h.x, -h.z),
            ];
            for (corner_idx, local) in locals.into_iter().enumerate() {
                let corner = b.position + local.rotated(b.angle);
                if corner.z < 0.0 {
                    let r = corner - b.position;
                    let inv_m = b.inv_mass();
                    let inv_i = b.inv_inertia();
                    // n = (0, 1): cross(r, n) = r.x; t = (1, 0): cross(r, t) = -r.z.
                    let kn = inv_m + inv_i * r.x * r.x;
                    let kt = inv_m + inv_i * r.z * r.z;
                    out.push(ContactConstraint {
                        body: i,
                        corner: corner_idx,
                        r,
                        local_x: local.x,
                        point: corner,
                        penetration: -corner.z,
                        inv_kn: 1.0 / kn,
                        inv_kt: 1.0 / kt,
                        normal_impulse: 0.0,
                        tangent_impulse: 0.0,
                    });
                }
            }
        }
        out
    }

    fn prepare_joints(
        &self,
        motor_commands: &[f64],
        start_angular: &[f64],
        _dt: f64,
    ) -> Vec<JointConstraint> {
        self.joints
            .iter()
            .enumerate()
            .map(|(j, joint)| {
                let a = &self.bodies[joint.body_a];
                let b = &self.bodies[joint.body_b];
                let ra = joint.anchor_a.rotated(a.angle);
                let rb = joint.anchor_b.rotated(b.angle);
                let (inv_ma, inv_ia) = (a.inv_mass(), a.inv_inertia());
                let (inv_mb, inv_ib) = (b.inv_mass(), b.inv_inertia());
                let k00 = inv_ma + inv_mb + inv_ia * ra.z * ra.z + inv_ib * rb.z * rb.z;
                let k01 = -(inv_ia * ra.x * ra.z + inv_ib * rb.x * rb.z);
                let k11 = inv_ma + inv_mb + inv_ia * ra.x * ra.x + inv_ib * rb.x * rb.x;
                let det = k00 * k11 - k01 * k01;
                let inv_det = 1.0 / det;
                let inv_k = [
                    k11 * inv_det,
                    -k01 * inv_det,
                    -k01 * inv_det,
                    k00 * inv_det,
                ];
                let position_error = (b.position + rb) - (a.position + ra);
                let motor_target = if joint.motor_enabled {
                    let max = joint.max_motor_velocity;
                    Some(motor_commands[j].clamp(-max, max))
                } else {
                    None
                };
                JointConstraint {
                    a: joint.body_a,
                    b: joint.body_b,
                    ra,
                    rb,
                    inv_k,
                    position_error,
                    inv_kw: 1.0 / (inv_ia + inv_ib),
                    motor_target,
                    rel_omega_start: start_angular[joint.body_b] - start_angular[joint.body_a],
                    angle: self.joint_angle(j),
                    lo: joint.angle_limits.0,
                    hi: joint.angle_limits.1,
                    point_impulse: Vec2::ZERO,
                    motor_impulse: 0.0,
                    lo_impulse: 0.0,
                    hi_impulse: 0.0,
                }
            })
            .collect()
    }

    fn solve_joint_point(&mut self, jc: &mut JointConstraint, dt: f64) {
        let (va, wa) = {
            let a = &self.bodies[jc.a];
            (a.linear_velocity, a.angular_velocity)
        };
        let (vb, wb) = {
            let b = &self.bodies[jc.b];
            (b.linear_velocity, b.angular_velocity)
        };
        let rel = (vb + jc.rb.perp() * wb) - (va + jc.ra.perp() * wa);
        let bias = jc.position_error * (BAUMGARTE / dt);
        let rhs = -(rel + bias);
        let impulse = Vec2::new(
            jc.inv_k[0] * rhs.x + jc.inv_k[1] * rhs.z,
            jc.inv_k[2] * rhs.x + jc.inv_k[3] * rhs.z,
        );
        jc.point_impulse += impulse;
        self.bodies[jc.a].apply_impulse(-impulse, jc.ra);
        self.bodies[jc.b].apply_impulse(impulse, jc.rb);
    }

    fn solve_joint_motor(&mut self, jc: &mut JointConstraint) {
        let Some(target) = jc.motor_target else {
            return;
        };
        let rel = self.bodies[jc.b].angular_velocity - self.bodies[jc.a].angular_velocity;
        let impulse = (target - rel) * jc.inv_kw;
        jc.motor_impulse += impulse;
        self.apply_angular_impulse(jc.a, jc.b, impulse);
    }

    fn solve_joint_limits(&mut self, jc: &mut JointConstraint, dt: f64) {
        // Speculative bounds: with the trapezoidal position update the next
        // angle is q + (w_start + w_end) * dt / 2, so capping w_end at
        // 2 C / dt - w_start prevents crossing the limit this substep.
        let rel =
            self.bodies[jc.b].angular_velocity - self.bodies[jc.a].angular_velocity;

        let c_hi = jc.hi - jc.angle;
        let hi_bound = if c_hi >= 0.0 {
            2.0 * c_hi / dt - jc.rel_omega_start
        } else {
            BAUMGARTE / dt * c_hi
        };
        if rel > hi_bound {
            let raw = (hi_bound - rel) * jc.inv_kw;
            let new_total = (jc.hi_impulse + raw).min(0.0);
            let delta = new_total - jc.hi_impulse;
            jc.hi_impulse = new_total;
            self.apply_angular_impulse(jc.a, jc.b, delta);
        }

        let rel =
            self.bodies[jc.b].angular_velocity - self.bodies[jc.a].angular_velocity;
        let c_lo = jc.angle - jc.lo;
        let lo_bound = if c_lo >= 0.0 {
            -2.0 * c_lo / dt - jc.rel_omega_start
        } else {
            -BAUMGARTE / dt * c_lo
        };
        if rel < lo_bound {
            let raw = (lo_bound - rel) * jc.inv_kw;
            let new_total = (jc.lo_impulse + raw).max(0.0);
            let delta = new_total - jc.lo_impulse;
            jc.lo_impulse = new_total;
            self.apply_angular_impulse(jc.a, jc.b, delta);
        }
    }

    fn apply_angular_impulse(&mut self, a: usize, b: usize, impulse: f64) {
        let inv_ia = self.bodies[a].inv_inertia();
        let inv_ib = self.bodies[b].inv_inertia();
        self.bodies[a].angular_velocity -= inv_ia * impulse;
        self.bodies[b].angular_velocity += inv_ib * impulse;
    }

    fn solve_contact(&mut self, cc: &mut ContactConstraint, dt: f64) {
        let body = &mut self.bodies[cc.body];

        // Normal: drive the contact-point vertical velocity to the Baumgarte
        // bias (zero inside the slop), accumulated impulse clamped >= 0.
        let vn = body.velocity_at(cc.r).z;
        let bias = BAUMGARTE / dt * (cc.penetration - PENETRATION_SLOP).max(0.0);
        let raw = -(vn - bias) * cc.inv_kn;
        let new_total = (cc.normal_impulse + raw).max(0.0);
        let delta = new_total - cc.normal_impulse;
        cc.normal_impulse = new_total;
        body.apply_impulse(Vec2::new(0.0, delta), cc.r);

        // Coulomb friction clamped to the cone of the accumulated normal.
        let vt = body.velocity_at(cc.r).x;
        let raw_t = -vt * cc.inv_kt;
        let max_t = self.friction * cc.normal_impulse;
        let new_total_t = (cc.tangent_impulse + raw_t).clamp(-max_t, max_t);
        let delta_t = new_total_t - cc.tangent_impulse;
        cc.tangent_impulse = new_total_t;
        body.apply_impulse(Vec2::new(delta_t, 0.0), cc.r);
    }

    /// Pressure readout of a designated foot body over the current cycle:
    /// impulses divided by the cycle duration, center of pressure as the
    /// normal-impulse-weighted mean contact x in the foot frame. Zeros while
    /// airborne.
    pub fn foot_pressure(&self, body: usize, cycle_dt: f64) -> Result<FootPressure> {
        if body >= self.bodies.len() {
            return Err(Error::BadBodyIndex(body));
        }
        let mut force = Vec2::ZERO;
        let mut weighted_x = 0.0;
        let mut total_normal = 0.0;
        for c in self.cycle_contacts.iter().filter(|c| c.body == body) {
            force += Vec2::new(c.tangent_impulse, c.normal_impulse);
            weighted_x += c.normal_impulse * c.local_x;
            total_normal += c.normal_impulse;
        }
        if total_normal == 0.0 {
            return Ok(FootPressure::default());
        }
        Ok(FootPressure {
            force: force * (1.0 / cycle_dt),
            center_of_pressure_x: weighted_x / total_normal,
        })
    }

    fn non_finite_snapshot(&self) -> Option<String> {
        for (i, b) in self.bodies.iter().enumerate() {
            if !b.is_finite() {
                return Some(format!(
                    "body {i}: pos ({}, {}) angle {} vel ({}, {}) omega {}",
                    b.position.x,
                    b.position.z,
                    b.angle,
                    b.linear_velocity.x,
                    b.linear_velocity.z,
                    b.angular_velocity
                ));
            }
        }
        None
    }

    /// One line of the replay state dump: per-body pose and velocity.
    pub fn dump_line(&self, cycle: u64, time: f64) -> String {
        let mut line = format!("c={cycle} t={time:.3}");
        for b in &self.bodies {
            line.push_str(&format!(
                " | {} {} {} {} {} {}",
                b.position.x,
                b.position.z,
                b.angle,
                b.linear_velocity.x,
                b.linear_velocity.z,
                b.angular_velocity
            ));
        }
        line
    }

    /// Header of the replay state dump.
    pub fn dump_header(&self) -> String {
        format!(
            "statedump 1 bodies={} fields=x,z,angle,vx,vz,omega",
            self.bodies.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_body() -> WorldState {
        let b = Body::rectangle(1.0, Vec2::new(0.05, 0.05), Vec2::new(0.0, 10.0));
        WorldState::new(vec![b], vec![])
    }

    #[test]
    fn ballistic_drop_matches_closed_form() {
        let mut w = free_body();
        w.bodies[0].linear_velocity = Vec2::new(0.0, 1.5);
        let (x0, z0, v0) = (0.0, 10.0, 1.5);
        let mut t = 0.0;
        for _ in 0..200 {
            w.step_in_place(SUBSTEP_DT, &[]).unwrap();
            t += SUBSTEP_DT;
        }
        let expect_z = z0 + v0 * t - 0.5 * 9.81 * t * t;
        assert!(
            (w.bodies[0].position.z - expect_z).abs() < 1e-3,
            "z {} vs {}",
            w.bodies[0].position.z,
            expect_z
        );
        assert!((w.bodies[0].position.x - x0).abs() < 1e-12);
    }

    #[test]
    fn resting_box_stays_put() {
        let b = Body::rectangle(1.0, Vec2::new(0.1, 0.05), Vec2::new(0.0, 0.05));
        let mut w = WorldState::new(vec![b], vec![]);
        for _ in 0..500 {
            w.step_in_place(SUBSTEP_DT, &[]).unwrap();
        }
        let body = &w.bodies[0];
        assert!(body.linear_velocity.length() < 1e-4, "v {:?}", body.linear_velocity);
        assert!(body.angular_velocity.abs() < 1e-4);
        // Bottom face must not sink more than the slop.
        let lowest = body
            .corners()
            .iter()
            .map(|c| c.z)
            .fold(f64::INFINITY, f64::min);
        assert!(lowest > -PENETRATION_SLOP, "penetration {lowest}");
    }

    #[test]
    fn settled_stack_kinetic_energy_stays_negligible() {
        let b = Body::rectangle(2.0, Vec2::new(0.1, 0.04), Vec2::new(0.0, 0.04));
        let mut w = WorldState::new(vec![b], vec![]);
        // Let it settle first.
        for _ in 0..200 {
            w.step_in_place(SUBSTEP_DT, &[]).unwrap();
        }
        for _ in 0..1000 {
            w.step_in_place(SUBSTEP_DT, &[]).unwrap();
            assert!(w.total_kinetic_energy() < 1e-6);
        }
    }

    #[test]
    fn pendulum_energy_drift_bounded() {
        // Passive rod hanging from a fixed pivot, released horizontal.
        let pivot = Body::fixed(Vec2::new(0.0, 2.0));
        let mut rod = Body::rectangle(1.0, Vec2::new(0.02, 0.15), Vec2::ZERO);
        rod.angle = -std::f64::consts::FRAC_PI_2;
        // Local anchor (0, 0.15) rotated by -pi/2 lands at (+0.15, 0), so
        // the rod center sits at (-0.15, 2.0) with its end on the pivot.
        rod.position = Vec2::new(-0.15, 2.0);
        let joint = RevoluteJoint::new(
            0,
            1,
            Vec2::ZERO,
            Vec2::new(0.0, 0.15),
            (-10.0, 10.0),
            100.0,
        )
        .passive();
        let mut w = WorldState::new(vec![pivot, rod], vec![joint]);
        let energy = |w: &WorldState| -> f64 {
            let b = &w.bodies[1];
            b.kinetic_energy() + b.mass * w.gravity.z.abs() * b.position.z
        };
        let e0 = energy(&w);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            w.step_in_place(SUBSTEP_DT, &[0.0]).unwrap();
            worst = worst.max((energy(&w) - e0).abs() / e0.abs());
        }
        assert!(worst < 0.02, "energy drift {worst}");
    }

    #[test]
    fn joint_limits_hold_under_motor_pressure() {
        let base = Body::rectangle(1e9, Vec2::new(0.01, 0.01), Vec2::new(0.0, 1.0));
        let arm = Body::rectangle(0.5, Vec2::new(0.02, 0.1), Vec2::new(0.0, 0.9));
        let joint = RevoluteJoint::new(0, 1, Vec2::ZERO, Vec2::new(0.0, 0.1), (-0.5, 0.4), 6.14);
        let mut w = WorldState::new(vec![base, arm], vec![joint]);
        w.gravity = Vec2::ZERO;
        // Drive hard into the upper limit, then the lower.
        for _ in 0..200 {
            w.step_in_place(SUBSTEP_DT, &[6.14]).unwrap();
            let q = w.joint_angle(0);
            assert!(q < 0.4 + 0.02, "upper limit violated: {q}");
        }
        for _ in 0..400 {
            w.step_in_place(SUBSTEP_DT, &[-6.14]).unwrap();
            let q = w.joint_angle(0);
            assert!(q > -0.5 - 0.02, "lower limit violated: {q}");
        }
    }

    #[test]
    fn motor_reaches_commanded_velocity() {
        let base = Body::rectangle(1e9, Vec2::new(0.01, 0.01), Vec2::new(0.0, 1.0));
        let arm = Body::rectangle(0.5, Vec2::new(0.02, 0.1), Vec2::new(0.0, 0.9));
        let joint = RevoluteJoint::new(0, 1, Vec2::ZERO, Vec2::new(0.0, 0.1), (-3.0, 3.0), 6.14);
        let mut w = WorldState::new(vec![base, arm], vec![joint]);
        w.gravity = Vec2::ZERO;
        w.step_in_place(SUBSTEP_DT, &[2.0]).unwrap();
        let rel = w.bodies[1].angular_velocity - w.bodies[0].angular_velocity;
        assert!((rel - 2.0).abs() < 1e-9, "rel omega {rel}");
        // Saturation applies to over-limit commands.
        w.step_in_place(SUBSTEP_DT, &[50.0]).unwrap();
        let rel = w.bodies[1].angular_velocity - w.bodies[0].angular_velocity;
        assert!((rel - 6.14).abs() < 1e-9, "saturated rel omega {rel}");
        assert_eq!(w.joints[0].motor_velocity_command, 6.14);
    }

    #[test]
    fn friction_cone_respected() {
        let mut b = Body::rectangle(1.0, Vec2::new(0.1, 0.05), Vec2::new(0.0, 0.049));
        b.linear_velocity = Vec2::new(3.0, 0.0);
        let mut w = WorldState::new(vec![b], vec![]);
        for _ in 0..100 {
            w.step_in_place(SUBSTEP_DT, &[]).unwrap();
            for c in &w.contacts {
                assert!(
                    c.tangent_impulse.abs() <= w.friction * c.normal_impulse + 1e-9,
                    "cone violated: |{}| > mu * {}",
                    c.tangent_impulse,
                    c.normal_impulse
                );
            }
        }
        // Sliding box on mu = 1 ground decelerates at ~g.
        assert!(w.bodies[0].linear_velocity.x < 0.01);
    }

    #[test]
    fn determinism_bitwise() {
        let run = || {
            let mut b = Body::rectangle(1.2, Vec2::new(0.08, 0.03), Vec2::new(0.0, 0.4));
            b.linear_velocity = Vec2::new(0.7, -0.2);
            b.angular_velocity = 1.3;
            let mut w = WorldState::new(vec![b], vec![]);
            for _ in 0..300 {
                w.step_in_place(SUBSTEP_DT, &[]).unwrap();
            }
            let b = &w.bodies[0];
            (
                b.position.x.to_bits(),
                b.position.z.to_bits(),
                b.angle.to_bits(),
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn airborne_foot_pressure_is_zero() {
        let w = free_body();
        let p = w.foot_pressure(0, 0.02).unwrap();
        assert_eq!(p, FootPressure::default());
    }

    #[test]
    fn single_contact_point_cop_is_that_offset() {
        // The weighting rule itself: one contact at the front edge.
        let b = Body::rectangle(0.2, Vec2::new(0.04, 0.01), Vec2::new(0.0, 0.01));
        let mut w = WorldState::new(vec![b], vec![]);
        w.cycle_contacts.push(Contact {
            body: 0,
            point: Vec2::new(0.04, 0.0),
            local_x: 0.04,
            normal_impulse: 0.3,
            tangent_impulse: 0.05,
        });
        let p = w.foot_pressure(0, 0.02).unwrap();
        assert_eq!(p.center_of_pressure_x, 0.04);
        assert!((p.force.z - 0.3 / 0.02).abs() < 1e-12);
        assert!((p.force.x - 0.05 / 0.02).abs() < 1e-12);
    }

    #[test]
    fn impact_on_one_corner_reads_that_corner() {
        // A tilted box first touches with a single corner; during impact
        // cycles the CoP must sit exactly on it.
        let mut b = Body::rectangle(1.0, Vec2::new(0.04, 0.01), Vec2::new(0.0, 0.06));
        b.angle = 0.3;
        let mut w = WorldState::new(vec![b], vec![]);
        for _ in 0..200 {
            w.begin_cycle();
            for _ in 0..4 {
                w.step_in_place(SUBSTEP_DT, &[]).unwrap();
            }
            if !w.cycle_contacts.is_empty()
                && w.cycle_contacts
                    .iter()
                    .all(|c| c.local_x == w.cycle_contacts[0].local_x)
            {
                let p = w.foot_pressure(0, 0.02).unwrap();
                assert!((p.center_of_pressure_x - w.cycle_contacts[0].local_x).abs() < 1e-12);
                return;
            }
        }
        panic!("never saw a single-corner contact cycle");
    }

    #[test]
    fn center_of_mass_two_equal_bodies() {
        let a = Body::rectangle(1.0, Vec2::new(0.1, 0.1), Vec2::new(0.0, 1.0));
        let b = Body::rectangle(1.0, Vec2::new(0.1, 0.1), Vec2::new(2.0, 1.0));
        let w = WorldState::new(vec![a, b], vec![]);
        let com = w.center_of_mass();
        assert!((com.x - 1.0).abs() < 1e-15);
        assert!((com.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn command_count_checked() {
        let w = free_body();
        assert!(matches!(
            w.step(SUBSTEP_DT, &[1.0]),
            Err(Error::CommandCount { .. })
        ));
    }
}
