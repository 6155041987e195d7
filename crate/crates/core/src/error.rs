use thiserror::Error;

/// Errors raised by the exact kernels and the factorization drivers.
///
/// Validation errors signal bad input; `NonTermination` and
/// `LiouvilleResidual` are internal guards that indicate either an invalid
/// input slipped past validation or a bug, and map to a distinct exit code
/// in the command-line frontend.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("denominator has an irreducible factor of degree >= 2 over Q(i)")]
    NonSplittingDenominator,
    #[error("evaluation at a pole")]
    EvalAtPole,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gram matrix singular")]
    SingularGram,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("no conjugation-invariant Lagrangian extension exists")]
    RealExtensionImpossible,
    #[error("no fixed line: the antilinear map is not an involution of the subspace")]
    NoFixedLine,
    #[error("degenerate plane")]
    DegeneratePlane,
    #[error("unexpected rank: {0}")]
    RankSurprise(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("loop has identically vanishing determinant")]
    SingularLoop,
    #[error("loop has a real pole at {0}, which violates the reality condition")]
    InvalidRealPole(String),
    #[error("loop is not a member of the requested group: {0}")]
    NotAMember(String),
    #[error("loop does not satisfy the twisting condition")]
    NotTwisted,
    #[error("pole parameter lies on the real or imaginary axis")]
    AlphaOnAxis,
    #[error("no splitting line for the simple-pole pair")]
    NoSplittingLine,
    #[error("simple factor spec invalid: {0}")]
    SpecInvalid(String),
    #[error("dressing requires the loop to be holomorphic at the pole")]
    HolomorphyPrecondition,
    #[error("loop is singular at the dressing pole")]
    SingularAtAlpha,
    #[error("pole clash: the two factors share a pole pair")]
    PoleClash,
    #[error("iteration budget exceeded; factorization did not terminate")]
    NonTermination,
    #[error("pole-free normalized residual is not the identity loop")]
    LiouvilleResidual,
    #[error("bracket left the affine algebra: {0}")]
    ClosureViolation(String),
    #[error("element is not in the odd part of the affine algebra")]
    NotInPhat,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("integer too large to factor by trial division")]
    FactorizationOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
