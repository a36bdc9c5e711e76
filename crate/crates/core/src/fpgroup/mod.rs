//! Finitely presented groups: words, presentations and coset enumeration,
//! presentations derived from permutation groups, colimit presentations of
//! triangles, abelianizations, and kernel-word search for Gersten–Stallings
//! angles.

pub mod abelian;
pub mod angle;
pub mod colimit;
pub mod coset;
pub mod derive;
pub mod presentation;
pub mod word;

pub use abelian::{abelianization, AbelianInvariants};
pub use angle::{gersten_stallings_sum, shortest_kernel_word, AngleN, AngleResult, AngleSum, Side, Syllable};
pub use colimit::{collapsing_triangle, EdgeIdentification, PresentedDiagram, PresentedVertex};
pub use coset::{enumerate_cosets, todd_coxeter, CosetTable, EnumerationResult, Strategy, TableStatus};
pub use derive::{coxeter_symmetric, evaluate, DerivedPresentation};
pub use presentation::{Presentation, PresentationFile};
pub use word::{Letter, Word};
