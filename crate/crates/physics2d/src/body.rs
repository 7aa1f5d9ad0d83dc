use crate::math::Vec2;

/// Rigid rectangle in the sagittal plane.
#[derive(Debug, Clone)]
pub struct Body {
    pub mass: f64,
    pub moment_of_inertia: f64,
    pub position: Vec2,
    pub angle: f64,
    pub linear_velocity: Vec2,
    pub angular_velocity: f64,
    /// Half extents of the rectangle collision shape (x, z).
    pub half_extents: Vec2,
    /// Static bodies are immovable anchors: infinite effective mass, no
    /// gravity, no integration. Used for fixtures such as pendulum pivots.
    pub is_static: bool,
}

impl Body {
    /// Uniform-density rectangle: inertia = m * (w^2 + h^2) / 12.
    pub fn rectangle(mass: f64, half_extents: Vec2, position: Vec2) -> Self {
        assert!(mass > 0.0, "mass must be positive");
        let w = 2.0 * half_extents.x;
        let h = 2.0 * half_extents.z;
        Self {
            mass,
            moment_of_inertia: mass * (w * w + h * h) / 12.0,
            position,
            angle: 0.0,
            linear_velocity: Vec2::ZERO,
            angular_velocity: 0.0,
            half_extents,
            is_static: false,
        }
    }

    pub fn fixed(position: Vec2) -> Self {
        let mut b = Self::rectangle(1.0, Vec2::new(0.01, 0.01), position);
        b.is_static = true;
        b
    }

    pub fn inv_mass(&self) -> f64 {
        if self.is_static {
            0.0
        } else {
            1.0 / self.mass
        }
    }

    pub fn inv_inertia(&self) -> f64 {
        if self.is_static {
            0.0
        } else {
            1.0 / self.moment_of_inertia
        }
    }

    /// World-space corners of the collision rectangle.
    pub fn corners(&self) -> [Vec2; 4] {
        let h = self.half_extents;
        [
            self.position + Vec2::new(h.x, h.z).rotated(self.angle),
            self.position + Vec2::new(-h.x, h.z).rotated(self.angle),
            self.position + Vec2::new(-h.x, -h.z).rotated(self.angle),
            self.position + Vec2::new(h.x, -h.z).rotated(self.angle),
        ]
    }

    /// Velocity of a world point at offset `r` from the center.
    pub fn velocity_at(&self, r: Vec2) -> Vec2 {
        self.linear_velocity + r.perp() * self.angular_velocity
    }

    pub fn apply_impulse(&mut self, impulse: Vec2, r: Vec2) {
        self.linear_velocity += impulse * self.inv_mass();
        self.angular_velocity += self.inv_inertia() * r.cross(impulse);
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.linear_velocity.dot(self.linear_velocity)
            + 0.5 * self.moment_of_inertia * self.angular_velocity * self.angular_velocity
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite()
            && self.angle.is_finite()
            && self.linear_velocity.is_finite()
            && self.angular_velocity.is_finite()
    }
}
