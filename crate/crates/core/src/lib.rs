//! One-face ribbon graphs on orientable and non-orientable surfaces:
//! the map kernel, tour-based statistics, the open/glue and averaging
//! bijections, exhaustive enumeration by polygon gluings, and exact counting
//! formulas.

pub mod bijections;
pub mod enumeration;
pub mod format;
pub mod formulas;
pub mod map;
pub mod unicellular;

pub use bijections::{
    averaging_involution, glue, open, phi, phi_inverse, remy_delete, remy_insert, BijectionError,
    BudSystem, GlueRule, MarkedTriple, Marker, Opened,
};
pub use enumeration::{
    collect_maps, enumerate, for_each_code, precubic_census, precubic_edges, precubic_maps,
    Accumulator, CensusFilter, CodeSummary, CountRow, CountTable, DominanceTable, EnumerationError,
    GluingCode, DEFAULT_CAP,
};
pub use formulas::FormulaError;
pub use format::{parse_documents, parse_map, write_map, ParseError};
pub use map::{
    BorderStep, EdgeId, FaceTrace, HalfEdge, HalfType, Hand, MapError, MapParts, RibbonMap, Root, VertexId,
    Violation,
};
pub use unicellular::{
    canonical_orientation, classify, core_scheme, is_canonical, tour, trisection_identity, Classification,
    CoreScheme, EdgeWay, Flavor, IntertwinedReport, MapReport, NodeKind, Tour, TwistDirection,
    UnicellularError,
};
