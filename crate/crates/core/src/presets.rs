//! The shipped calculi and quantum (super)groups.
//!
//! Rules are written as text in normal-ordered form. Each
//! preset also carries its defining relations transcribed separately in the
//! unoriented `L = R` shape in which they are displayed, so that relation
//! closure is checked against an independent transcription.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::expr::{parse, ExprError};
use crate::ncalgebra::{Element, Presentation, PresentationError, RewriteRule, Word};
use crate::scalar::{Scalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresetId {
    PlanePqD2,
    PlaneQD2,
    PlanePqD3,
    SplaneQD2,
    SplaneQD3,
    SplanePqD2,
    SplanePqD3,
    GlPq2,
    GlQ11,
    GlPq11,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresetError {
    #[error("unknown preset `{0}`")]
    UnknownId(String),
    #[error("specialization failed: {0}")]
    Specialize(PresentationError),
    #[error("preset {id}: {msg}")]
    Transcription { id: &'static str, msg: String },
}

impl PresetId {
    pub const ALL: [PresetId; 10] = [
        PresetId::PlanePqD2,
        PresetId::PlaneQD2,
        PresetId::PlanePqD3,
        PresetId::SplaneQD2,
        PresetId::SplaneQD3,
        PresetId::SplanePqD2,
        PresetId::SplanePqD3,
        PresetId::GlPq2,
        PresetId::GlQ11,
        PresetId::GlPq11,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetId::PlanePqD2 => "plane-pq-d2",
            PresetId::PlaneQD2 => "plane-q-d2",
            PresetId::PlanePqD3 => "plane-pq-d3",
            PresetId::SplaneQD2 => "splane-q-d2",
            PresetId::SplaneQD3 => "splane-q-d3",
            PresetId::SplanePqD2 => "splane-pq-d2",
            PresetId::SplanePqD3 => "splane-pq-d3",
            PresetId::GlPq2 => "gl-pq-2",
            PresetId::GlQ11 => "gl-q-11",
            PresetId::GlPq11 => "gl-pq-11",
        }
    }

    /// `Some(n)` for a calculus with d^n = 0, `None` for a group.
    pub fn nilpotency(self) -> Option<u8> {
        match self {
            PresetId::PlanePqD2 | PresetId::PlaneQD2 | PresetId::SplaneQD2 | PresetId::SplanePqD2 => Some(2),
            PresetId::PlanePqD3 | PresetId::SplaneQD3 | PresetId::SplanePqD3 => Some(3),
            _ => None,
        }
    }

    pub fn is_calculus(self) -> bool {
        self.nilpotency().is_some()
    }

    pub fn is_super(self) -> bool {
        matches!(self, PresetId::SplaneQD2 | PresetId::SplaneQD3 | PresetId::SplanePqD2 | PresetId::SplanePqD3)
    }

    pub fn calculi() -> impl Iterator<Item = PresetId> {
        Self::ALL.into_iter().filter(|p| p.is_calculus())
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetId {
    type Err = PresetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|p| p.as_str() == s).ok_or_else(|| PresetError::UnknownId(s.to_string()))
    }
}

struct Table {
    gens: &'static [(&'static str, u8, u8)],
    params: &'static [Var],
    note: &'static str,
    rules: &'static [(&'static str, &'static str)],
    relations: &'static [(&'static str, &'static str)],
    /// Relations used as rules but not part of the displayed block.
    imported: &'static [(&'static str, &'static str)],
}

// Generator tuples are (name, degree, parity). Super coordinates and their
// differentials carry the Grassmann parity of the underlying coordinate.

const PLANE_D2: &[(&str, u8, u8)] = &[("dy", 1, 0), ("dx", 1, 0), ("x", 0, 0), ("y", 0, 0)];
const PLANE_D3: &[(&str, u8, u8)] =
    &[("d2y", 2, 0), ("d2x", 2, 0), ("dy", 1, 0), ("dx", 1, 0), ("x", 0, 0), ("y", 0, 0)];
const SPLANE_D2: &[(&str, u8, u8)] = &[("dtheta", 1, 1), ("dx", 1, 0), ("x", 0, 0), ("theta", 0, 1)];
const SPLANE_D3: &[(&str, u8, u8)] = &[
    ("d2theta", 2, 1),
    ("d2x", 2, 0),
    ("dtheta", 1, 1),
    ("dx", 1, 0),
    ("x", 0, 0),
    ("theta", 0, 1),
];
const GL2: &[(&str, u8, u8)] = &[("a", 0, 0), ("b", 0, 0), ("c", 0, 0), ("dgen", 0, 0)];
const GL11: &[(&str, u8, u8)] = &[("a", 0, 0), ("beta", 0, 1), ("gamma", 0, 1), ("dgen", 0, 0)];

const PLANE_PQ_D2: Table = Table {
    gens: PLANE_D2,
    params: &[Var::Q, Var::P],
    note: "first-order calculus with d^2=0 on the quantum plane xy=q*yx, covariant under GL_{p,q'}(2) with q'=q, k=q/p",
    rules: &[
        ("y*x", "(1/q)*x*y"),
        ("x*dx", "1/(p*q)*dx*x"),
        ("x*dy", "(1/p)*dy*x"),
        ("y*dy", "1/(p*q)*dy*y"),
        ("y*dx", "(1/(p*q) - 1)*dy*x + (1/q)*dx*y"),
        ("dx*dy", "-(1/p)*dy*dx"),
        ("dx*dx", "0"),
        ("dy*dy", "0"),
    ],
    relations: &[
        ("x*y", "q*y*x"),
        ("x*dx", "1/(p*q)*dx*x"),
        ("x*dy", "1/p*dy*x"),
        ("y*dy", "1/(p*q)*dy*y"),
        ("y*dx", "(1/(p*q) - 1)*dy*x + 1/q*dx*y"),
        ("dx*dy", "-1/p*dy*dx"),
        ("dx^2", "0"),
        ("dy^2", "0"),
    ],
    imported: &[],
};

const PLANE_Q_D2: Table = Table {
    gens: PLANE_D2,
    params: &[Var::Q],
    note: "one-parameter plane calculus with d^2=0, the p=q case of plane-pq-d2 (GL_q(2) covariance)",
    rules: &[
        ("y*x", "q^-1*x*y"),
        ("x*dx", "q^-2*dx*x"),
        ("x*dy", "q^-1*dy*x"),
        ("y*dy", "q^-2*dy*y"),
        ("y*dx", "(q^-2 - 1)*dy*x + q^-1*dx*y"),
        ("dx*dy", "-q^-1*dy*dx"),
        ("dx*dx", "0"),
        ("dy*dy", "0"),
    ],
    relations: &[
        ("x*y", "q*y*x"),
        ("q^2*x*dx", "dx*x"),
        ("q*x*dy", "dy*x"),
        ("q^2*y*dy", "dy*y"),
        ("q^2*y*dx", "(1 - q^2)*dy*x + q*dx*y"),
        ("q*dx*dy + dy*dx", "0"),
        ("dx^2", "0"),
        ("dy^2", "0"),
    ],
    imported: &[],
};

const PLANE_PQ_D3: Table = Table {
    gens: PLANE_D3,
    params: &[Var::Q, Var::P],
    note: "calculus with d^3=0 and j-graded Leibniz rule on the quantum plane xy=q*yx; (dx)^3=(dy)^3=0 included as rules",
    rules: &[
        ("y*x", "(1/q)*x*y"),
        ("x*dx", "j^2*dx*x"),
        ("x*dy", "-(j*q)/(1+q*p)*dy*x + (j^2*q*p - 1)/(1+q*p)*dx*y"),
        ("y*dy", "j^2*dy*y"),
        ("y*dx", "(j^2 - q*p)/(1+q*p)*dy*x - (j*p)/(1+q*p)*dx*y"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2y", "-(j*q)/(1+q*p)*d2y*x + (j^2*q*p - 1)/(1+q*p)*d2x*y"),
        ("y*d2y", "j^2*d2y*y"),
        ("y*d2x", "(j^2 - q*p)/(1+q*p)*d2y*x - (j*p)/(1+q*p)*d2x*y"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2y", "-q/(1+q*p)*d2y*dx + (j*q*p - j^2)/(1+q*p)*d2x*dy"),
        ("dy*d2y", "j*d2y*dy"),
        ("dy*d2x", "(j - j^2*q*p)/(1+q*p)*d2y*dx - p/(1+q*p)*d2x*dy"),
        ("dx*dy", "q*dy*dx"),
        ("d2x*d2y", "q*d2y*d2x"),
        ("dx*dx*dx", "0"),
        ("dy*dy*dy", "0"),
    ],
    relations: &[
        ("x*y", "q*y*x"),
        ("x*dx", "j^2*dx*x"),
        ("x*dy", "-j*q/(1+q*p)*dy*x + (j^2*q*p-1)/(1+q*p)*dx*y"),
        ("y*dy", "j^2*dy*y"),
        ("y*dx", "(j^2-q*p)/(1+q*p)*dy*x - j*p/(1+q*p)*dx*y"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2y", "-j*q/(1+q*p)*d2y*x + (j^2*q*p-1)/(1+q*p)*d2x*y"),
        ("y*d2y", "j^2*d2y*y"),
        ("y*d2x", "(j^2-q*p)/(1+q*p)*d2y*x - j*p/(1+q*p)*d2x*y"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2y", "-q/(1+q*p)*d2y*dx + (j*q*p-j^2)/(1+q*p)*d2x*dy"),
        ("dy*d2y", "j*d2y*dy"),
        ("dy*d2x", "(j-j^2*q*p)/(1+q*p)*d2y*dx - p/(1+q*p)*d2x*dy"),
        ("dx*dy", "q*dy*dx"),
        ("d2x*d2y", "q*d2y*d2x"),
    ],
    imported: &[("dx^3", "0"), ("dy^3", "0")],
};

const SPLANE_Q_D2: Table = Table {
    gens: SPLANE_D2,
    params: &[Var::Q],
    note: "calculus with d^2=0 on the quantum superplane x*theta=q*theta*x, theta^2=0, covariant under GL_q(1|1)",
    rules: &[
        ("theta*x", "q^-1*x*theta"),
        ("theta*theta", "0"),
        ("x*dx", "q^-2*dx*x"),
        ("x*dtheta", "q^-1*dtheta*x"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(1 - q^-2)*dtheta*x - q^-1*dx*theta"),
        ("dx*dtheta", "q^-1*dtheta*dx"),
        ("dx*dx", "0"),
    ],
    relations: &[
        ("x*theta", "q*theta*x"),
        ("theta^2", "0"),
        ("x*dx", "q^-2*dx*x"),
        ("x*dtheta", "q^-1*dtheta*x"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(1-q^-2)*dtheta*x - q^-1*dx*theta"),
        ("dx*dtheta", "q^-1*dtheta*dx"),
        ("dx^2", "0"),
    ],
    imported: &[],
};

const SPLANE_PQ_D2: Table = Table {
    gens: SPLANE_D2,
    params: &[Var::Q, Var::P],
    note: "calculus with d^2=0 on the quantum superplane, covariant under GL_{p,q'}(1|1) with q'=q, k=q/p",
    rules: &[
        ("theta*x", "q^-1*x*theta"),
        ("theta*theta", "0"),
        ("x*dx", "(q*p)^-1*dx*x"),
        ("x*dtheta", "p^-1*dtheta*x"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(1 - (q*p)^-1)*dtheta*x - q^-1*dx*theta"),
        ("dx*dtheta", "p^-1*dtheta*dx"),
        ("dx*dx", "0"),
    ],
    relations: &[
        ("x*theta", "q*theta*x"),
        ("theta^2", "0"),
        ("x*dx", "(q*p)^-1*dx*x"),
        ("x*dtheta", "p^-1*dtheta*x"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(1-(q*p)^-1)*dtheta*x - q^-1*dx*theta"),
        ("dx*dtheta", "p^-1*dtheta*dx"),
        ("dx^2", "0"),
    ],
    imported: &[],
};

const SPLANE_Q_D3: Table = Table {
    gens: SPLANE_D3,
    params: &[Var::Q],
    note: "calculus with d^3=0 and j-graded super Leibniz rule on the one-parameter quantum superplane",
    rules: &[
        ("theta*x", "q^-1*x*theta"),
        ("theta*theta", "0"),
        ("x*dx", "j^2*dx*x"),
        ("x*dtheta", "-(j*q)/(1+q^2)*dtheta*x + (j^2*q^2 - 1)/(1+q^2)*dx*theta"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(q^2 - j^2)/(1+q^2)*dtheta*x + (j*q)/(1+q^2)*dx*theta"),
        ("dx*dtheta", "-q*dtheta*dx"),
        ("dtheta*dtheta", "0"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2theta", "-(j*q)/(1+q^2)*d2theta*x + (j^2*q^2 - 1)/(1+q^2)*d2x*theta"),
        ("theta*d2theta", "-d2theta*theta"),
        ("theta*d2x", "(j^2 - q^2)/(1+q^2)*d2theta*x - (j*q)/(1+q^2)*d2x*theta"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2theta", "q/(1+q^2)*d2theta*dx + (j*q^2 - j^2)/(1+q^2)*d2x*dtheta"),
        ("dtheta*d2theta", "j^2*d2theta*dtheta"),
        ("dtheta*d2x", "(j^2*q^2 - j)/(1+q^2)*d2theta*dx - q/(1+q^2)*d2x*dtheta"),
        ("d2x*d2theta", "q*d2theta*d2x"),
        ("d2theta*d2theta", "0"),
    ],
    relations: &[
        ("x*theta", "q*theta*x"),
        ("theta^2", "0"),
        ("x*dx", "j^2*dx*x"),
        ("x*dtheta", "-j*q/(1+q^2)*dtheta*x + (j^2*q^2-1)/(1+q^2)*dx*theta"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(q^2-j^2)/(1+q^2)*dtheta*x + j*q/(1+q^2)*dx*theta"),
        ("dx*dtheta", "-q*dtheta*dx"),
        ("dtheta^2", "0"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2theta", "-j*q/(1+q^2)*d2theta*x + (j^2*q^2-1)/(1+q^2)*d2x*theta"),
        ("theta*d2theta", "-d2theta*theta"),
        ("theta*d2x", "(j^2-q^2)/(1+q^2)*d2theta*x - j*q/(1+q^2)*d2x*theta"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2theta", "q/(1+q^2)*d2theta*dx + (j*q^2-j^2)/(1+q^2)*d2x*dtheta"),
        ("dtheta*d2theta", "j^2*d2theta*dtheta"),
        ("dtheta*d2x", "(j^2*q^2-j)/(1+q^2)*d2theta*dx - q/(1+q^2)*d2x*dtheta"),
        ("d2x*d2theta", "q*d2theta*d2x"),
        ("d2theta^2", "0"),
    ],
    imported: &[],
};

const SPLANE_PQ_D3: Table = Table {
    gens: SPLANE_D3,
    params: &[Var::Q, Var::P],
    note: "calculus with d^3=0 and j-graded super Leibniz rule on the two-parameter quantum superplane",
    rules: &[
        ("theta*x", "q^-1*x*theta"),
        ("theta*theta", "0"),
        ("x*dx", "j^2*dx*x"),
        ("x*dtheta", "-(j*q)/(1+q*p)*dtheta*x + (j^2*q*p - 1)/(1+q*p)*dx*theta"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(q*p - j^2)/(1+q*p)*dtheta*x + (j*p)/(1+q*p)*dx*theta"),
        ("dx*dtheta", "-q*dtheta*dx"),
        ("dtheta*dtheta", "0"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2theta", "-(j*q)/(1+q*p)*d2theta*x + (j^2*q*p - 1)/(1+q*p)*d2x*theta"),
        ("theta*d2theta", "-d2theta*theta"),
        ("theta*d2x", "(j^2 - q*p)/(1+q*p)*d2theta*x - (j*p)/(1+q*p)*d2x*theta"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2theta", "q/(1+q*p)*d2theta*dx + (j*q*p - j^2)/(1+q*p)*d2x*dtheta"),
        ("dtheta*d2theta", "j^2*d2theta*dtheta"),
        ("dtheta*d2x", "(j^2*q*p - j)/(1+q*p)*d2theta*dx - p/(1+q*p)*d2x*dtheta"),
        ("d2x*d2theta", "q*d2theta*d2x"),
        ("d2theta*d2theta", "0"),
    ],
    relations: &[
        ("x*theta", "q*theta*x"),
        ("theta^2", "0"),
        ("x*dx", "j^2*dx*x"),
        ("x*dtheta", "-j*q/(1+q*p)*dtheta*x + (j^2*q*p-1)/(1+q*p)*dx*theta"),
        ("theta*dtheta", "dtheta*theta"),
        ("theta*dx", "(q*p-j^2)/(1+q*p)*dtheta*x + j*p/(1+q*p)*dx*theta"),
        ("dx*dtheta", "-q*dtheta*dx"),
        ("dtheta^2", "0"),
        ("x*d2x", "j^2*d2x*x"),
        ("x*d2theta", "-j*q/(1+q*p)*d2theta*x + (j^2*q*p-1)/(1+q*p)*d2x*theta"),
        ("theta*d2theta", "-d2theta*theta"),
        ("theta*d2x", "(j^2-q*p)/(1+q*p)*d2theta*x - j*p/(1+q*p)*d2x*theta"),
        ("dx*d2x", "j*d2x*dx"),
        ("dx*d2theta", "q/(1+q*p)*d2theta*dx + (j*q*p-j^2)/(1+q*p)*d2x*dtheta"),
        ("dtheta*d2theta", "j^2*d2theta*dtheta"),
        ("dtheta*d2x", "(j^2*q*p-j)/(1+q*p)*d2theta*dx - p/(1+q*p)*d2x*dtheta"),
        ("d2x*d2theta", "q*d2theta*d2x"),
        ("d2theta^2", "0"),
    ],
    imported: &[],
};

const GL_PQ_2: Table = Table {
    gens: GL2,
    params: &[Var::P, Var::QPRIME],
    note: "quantum group GL_{p,q'}(2), matrix entries a, b, c, dgen",
    rules: &[
        ("b*a", "p^-1*a*b"),
        ("c*a", "q'^-1*a*c"),
        ("c*b", "(p/q')*b*c"),
        ("dgen*c", "p^-1*c*dgen"),
        ("dgen*b", "q'^-1*b*dgen"),
        ("dgen*a", "a*dgen - (p - 1/q')*b*c"),
    ],
    relations: &[
        ("a*b", "p*b*a"),
        ("c*dgen", "p*dgen*c"),
        ("a*c", "q'*c*a"),
        ("b*dgen", "q'*dgen*b"),
        ("p*b*c", "q'*c*b"),
        ("a*dgen - dgen*a", "(p - 1/q')*b*c"),
    ],
    imported: &[],
};

const GL_Q_11: Table = Table {
    gens: GL11,
    params: &[Var::Q],
    note: "quantum supergroup GL_q(1|1), even entries a, dgen and odd entries beta, gamma",
    rules: &[
        ("beta*a", "q^-1*a*beta"),
        ("gamma*a", "q^-1*a*gamma"),
        ("dgen*beta", "q*beta*dgen"),
        ("dgen*gamma", "q*gamma*dgen"),
        ("gamma*beta", "-beta*gamma"),
        ("beta*beta", "0"),
        ("gamma*gamma", "0"),
        ("dgen*a", "a*dgen - (q^-1 - q)*beta*gamma"),
    ],
    relations: &[
        ("a*beta", "q*beta*a"),
        ("dgen*beta", "q*beta*dgen"),
        ("a*gamma", "q*gamma*a"),
        ("dgen*gamma", "q*gamma*dgen"),
        ("beta*gamma + gamma*beta", "0"),
        ("beta^2", "0"),
        ("gamma^2", "0"),
        ("a*dgen - dgen*a", "(q^-1 - q)*beta*gamma"),
    ],
    imported: &[],
};

const GL_PQ_11: Table = Table {
    gens: GL11,
    params: &[Var::P, Var::QPRIME],
    note: "quantum supergroup GL_{p,q'}(1|1), even entries a, dgen and odd entries beta, gamma",
    rules: &[
        ("beta*a", "p^-1*a*beta"),
        ("gamma*a", "q'^-1*a*gamma"),
        ("dgen*beta", "p*beta*dgen"),
        ("dgen*gamma", "q'*gamma*dgen"),
        ("gamma*beta", "-(p/q')*beta*gamma"),
        ("beta*beta", "0"),
        ("gamma*gamma", "0"),
        ("dgen*a", "a*dgen - (q'^-1 - p)*beta*gamma"),
    ],
    relations: &[
        ("a*beta", "p*beta*a"),
        ("dgen*beta", "p*beta*dgen"),
        ("a*gamma", "q'*gamma*a"),
        ("dgen*gamma", "q'*gamma*dgen"),
        ("p*beta*gamma + q'*gamma*beta", "0"),
        ("beta^2", "0"),
        ("gamma^2", "0"),
        ("a*dgen - dgen*a", "(q'^-1 - p)*beta*gamma"),
    ],
    imported: &[],
};

fn table(id: PresetId) -> &'static Table {
    match id {
        PresetId::PlanePqD2 => &PLANE_PQ_D2,
        PresetId::PlaneQD2 => &PLANE_Q_D2,
        PresetId::PlanePqD3 => &PLANE_PQ_D3,
        PresetId::SplaneQD2 => &SPLANE_Q_D2,
        PresetId::SplaneQD3 => &SPLANE_Q_D3,
        PresetId::SplanePqD2 => &SPLANE_PQ_D2,
        PresetId::SplanePqD3 => &SPLANE_PQ_D3,
        PresetId::GlPq2 => &GL_PQ_2,
        PresetId::GlQ11 => &GL_Q_11,
        PresetId::GlPq11 => &GL_PQ_11,
    }
}

fn text_element(id: PresetId, gens: &[(&str, u8, u8)], src: &str) -> Result<Element, PresetError> {
    let rank = |n: &str| gens.iter().position(|g| g.0 == n).map(|i| i as u8);
    parse(src)
        .and_then(|e| e.to_element_with(&rank))
        .map_err(|e: ExprError| PresetError::Transcription { id: id.as_str(), msg: format!("`{src}`: {e}") })
}

fn build(id: PresetId) -> Result<Presentation, PresetError> {
    let t = table(id);
    let mut rules = Vec::with_capacity(t.rules.len());
    for (lhs, rhs) in t.rules {
        let l = text_element(id, t.gens, lhs)?;
        let lhs_word = crate::expr::as_word(&l)
            .ok_or_else(|| PresetError::Transcription { id: id.as_str(), msg: format!("`{lhs}` is not a word") })?;
        rules.push(RewriteRule { lhs: lhs_word, rhs: text_element(id, t.gens, rhs)? });
    }
    let gens = t.gens.iter().map(|(n, d, p)| (n.to_string(), *d, *p)).collect();
    Presentation::new(id.as_str(), gens, rules, t.params.to_vec(), vec![t.note.to_string()], vec![])
        .map_err(|e| PresetError::Transcription { id: id.as_str(), msg: e.to_string() })
}

/// The validated presentation of a preset.
pub fn preset(id: PresetId) -> Presentation {
    build(id).unwrap_or_else(|e| panic!("shipped preset is invalid: {e}"))
}

/// Looks a preset up by its textual id.
pub fn preset_by_name(name: &str) -> Result<Presentation, PresetError> {
    Ok(preset(name.parse()?))
}

/// The defining relations as displayed, each as `L - R`, unnormalized.
pub fn displayed_relations(id: PresetId) -> Vec<(String, Element)> {
    relation_list(id, table(id).relations)
}

/// Extra relations shipped as rules without being displayed with the rest:
/// `(dx)^3 = (dy)^3 = 0` in the d^3 plane.
pub fn imported_relations(id: PresetId) -> Vec<(String, Element)> {
    relation_list(id, table(id).imported)
}

fn relation_list(id: PresetId, list: &[(&str, &str)]) -> Vec<(String, Element)> {
    let t = table(id);
    list.iter()
        .map(|(l, r)| {
            let e = text_element(id, t.gens, l)
                .and_then(|le| Ok(le.sub(&text_element(id, t.gens, r)?)))
                .unwrap_or_else(|e| panic!("shipped relation is invalid: {e}"));
            (format!("{l} = {r}"), e)
        })
        .collect()
}

/// Substitutes parameters in every rule coefficient and re-validates.
pub fn specialize(p: &Presentation, bindings: &[(Var, Scalar)]) -> Result<Presentation, PresetError> {
    p.substitute(bindings).map_err(PresetError::Specialize)
}

/// The binding `p -> q`.
pub fn p_to_q() -> Vec<(Var, Scalar)> {
    vec![(Var::P, Scalar::q())]
}

/// The binding `p -> j^2 / q`, i.e. `pq = j^2`.
pub fn pq_is_j2() -> Vec<(Var, Scalar)> {
    let j = Scalar::j();
    vec![(Var::P, &(&j * &j) / &Scalar::q())]
}

/// The one-parameter preset a two-parameter calculus should reduce to at
/// `p = q`.
pub fn limit_target(id: PresetId) -> Option<PresetId> {
    match id {
        PresetId::PlanePqD2 => Some(PresetId::PlaneQD2),
        PresetId::SplanePqD2 => Some(PresetId::SplaneQD2),
        PresetId::SplanePqD3 => Some(PresetId::SplaneQD3),
        _ => None,
    }
}

/// Rule-by-rule comparison; one line per disagreeing or unmatched rule.
pub fn rule_differences(a: &Presentation, b: &Presentation) -> Vec<String> {
    let mut out = Vec::new();
    if a.generator_table() != b.generator_table() {
        out.push("generator tables differ".to_string());
        return out;
    }
    for r in a.rules() {
        let name = a.word_name(&r.lhs);
        match b.rule_for(&r.lhs) {
            None => out.push(format!("{name}: only on the left")),
            Some(o) if o.rhs != r.rhs => out.push(format!("{name}: {} vs {}", a.show(&r.rhs), b.show(&o.rhs))),
            Some(_) => {}
        }
    }
    for r in b.rules() {
        if a.rule_for(&r.lhs).is_none() {
            out.push(format!("{}: only on the right", b.word_name(&r.lhs)));
        }
    }
    out
}

/// Word of a preset spelled by names; panics on a typo.
pub fn word(p: &Presentation, names: &[&str]) -> Word {
    p.word(names).expect("known generator names")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for id in PresetId::ALL {
            let p = preset(id);
            assert_eq!(p.name(), id.as_str());
            assert_eq!(id.as_str().parse::<PresetId>().unwrap(), id);
        }
    }

    #[test]
    fn p_to_q_limits_match_one_parameter_presets() {
        for id in PresetId::ALL {
            if let Some(target) = limit_target(id) {
                let got = specialize(&preset(id), &p_to_q()).unwrap();
                assert_eq!(rule_differences(&got, &preset(target)), Vec::<String>::new(), "{id}");
            }
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(preset_by_name("bogus").unwrap_err(), PresetError::UnknownId("bogus".into()));
    }

    #[test]
    fn generator_counts_and_orders() {
        let p = preset(PresetId::PlanePqD2);
        let names: Vec<_> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["dy", "dx", "x", "y"]);
        assert_eq!(p.rules().len(), 8);
        assert_eq!(preset(PresetId::SplaneQD2).generators().len(), 4);
        assert_eq!(preset(PresetId::PlanePqD3).generators().len(), 6);
    }

    #[test]
    fn splane_q_d2_dx_dtheta_rule() {
        let p = preset(PresetId::SplaneQD2);
        let r = p.rule_for(&word(&p, &["dx", "dtheta"])).unwrap();
        assert_eq!(r.rhs.coeff(&word(&p, &["dtheta", "dx"])), Scalar::q().inv().unwrap());
    }

    #[test]
    fn gl_pq_2_ab_rule() {
        let p = preset(PresetId::GlPq2);
        let r = p.rule_for(&word(&p, &["b", "a"])).unwrap();
        assert_eq!(r.rhs.coeff(&word(&p, &["a", "b"])), Scalar::p().inv().unwrap());
    }

    #[test]
    fn specialize_x_dx_coefficient() {
        let p = specialize(&preset(PresetId::PlanePqD2), &p_to_q()).unwrap();
        let r = p.rule_for(&word(&p, &["x", "dx"])).unwrap();
        assert_eq!(r.rhs.coeff(&word(&p, &["dx", "x"])), Scalar::q().pow(-2).unwrap());
    }

    #[test]
    fn specialize_reports_pole_with_rule_name() {
        let p = preset(PresetId::PlanePqD3);
        let bad = vec![(Var::P, -&Scalar::q().inv().unwrap())];
        match specialize(&p, &bad) {
            Err(PresetError::Specialize(PresentationError::Coefficient { rule, .. })) => assert_eq!(rule, "x*dy"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
