//! Which construction and which side of its interface.

use super::profile::{GraphAmplitude, TwistProfile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainKind {
    /// `Omega^+- = {+- s o Phi_{-theta} > 0}`.
    TwistedSzulkin(TwistProfile),
    /// `Omega^+- = {+-(z - v(x, y)) > 0}`.
    OscillatingGraph(GraphAmplitude),
}

impl DomainKind {
    pub fn is_twist(&self) -> bool {
        matches!(self, DomainKind::TwistedSzulkin(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::TwistedSzulkin(_) => "twist",
            DomainKind::OscillatingGraph(_) => "graph",
        }
    }
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainKind::TwistedSzulkin(p) => write!(f, "twist({})", p.law()),
            DomainKind::OscillatingGraph(a) => write!(f, "graph({a})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    /// The default pole `(0, 0, +-1)`, fixed by the twist and swapped by `x -> -x`.
    pub fn default_pole(self) -> crate::Vec3 {
        crate::Vec3::new(0.0, 0.0, self.sign())
    }

    pub fn opposite(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn of(value: f64) -> Option<Self> {
        if value > 0.0 {
            Some(Side::Plus)
        } else if value < 0.0 {
            Some(Side::Minus)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            o => Err(crate::Error::InvalidArgument(format!("unknown side '{o}'"))),
        }
    }
}
