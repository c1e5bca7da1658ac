use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Evaluation hit a pole; carries the pole order.
    Pole { order: u32 },
    /// The function or form vanishes identically.
    IdenticallyZero,
    /// Two curve functions live on different curves.
    CurveMismatch,
    /// A path comes closer than the clearance to a branch point or puncture.
    Clearance { segment: usize, param: f64, distance: f64 },
    /// Adaptive quadrature ran out of depth.
    Quadrature { lo: f64, hi: f64, error: f64 },
    /// The integrand produced a non-finite value.
    NonFinite { param: f64 },
    /// No punctured disk around the pole is free of other singular points.
    NoIsolationDisk,
    /// A declared end where every form is finite.
    NotAnEnd { index: usize },
    /// No regular value found while counting preimages.
    NoRegularValue,
    /// Periods of the homology test form are numerically dependent.
    IllConditioned,
    /// The Klein period function has the wrong number of roots.
    RootCount { found: usize },
    /// An input is outside the operation's domain.
    InvalidInput(&'static str),
    /// The period problem fails on the named loop.
    Obstructed { loop_index: usize },
    /// The lifted metric vanishes somewhere; carries the number of zeros found.
    Branched { zeros: usize },
    /// No clearance-respecting integration path reaches the point.
    Unreachable,
    /// The point does not lie on the domain.
    NotOnDomain,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { order } => write!(f, "pole of order {order}"),
            Error::IdenticallyZero => write!(f, "function vanishes identically"),
            Error::CurveMismatch => write!(f, "curve functions on different curves"),
            Error::Clearance { segment, param, distance } => write!(
                f,
                "path segment {segment} at t = {param} passes within {distance:e} of a branch point or puncture"
            ),
            Error::Quadrature { lo, hi, error } => write!(
                f,
                "quadrature did not converge on [{lo}, {hi}] (error estimate {error:e})"
            ),
            Error::NonFinite { param } => write!(f, "non-finite integrand at t = {param}"),
            Error::NoIsolationDisk => write!(f, "no isolation disk around the pole"),
            Error::NotAnEnd { index } => write!(f, "declared end {index} is not a pole of any form"),
            Error::NoRegularValue => write!(f, "no regular value found"),
            Error::IllConditioned => write!(f, "homology periods are numerically dependent"),
            Error::RootCount { found } => write!(f, "expected two roots of h, found {found}"),
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::Obstructed { loop_index } => {
                write!(f, "period problem is obstructed on loop {loop_index}")
            }
            Error::Branched { zeros } => write!(f, "data has {zeros} branch point(s)"),
            Error::Unreachable => write!(f, "point unreachable by a clearance-respecting path"),
            Error::NotOnDomain => write!(f, "point does not lie on the domain"),
        }
    }
}

impl core::error::Error for Error {}
