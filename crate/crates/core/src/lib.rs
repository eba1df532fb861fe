//! Domino substitution tilings and the aperiodic tile sets that enforce them.
//!
//! The crate has three layers:
//!
//! * the symbol calculus (`symbol`) describing substitution rules on a
//!   doubled domino, with an exhaustive census of the rule space;
//! * the domino-level geometry (`engine`): supertile expansion, deflation,
//!   decomposition counting and periodicity scans;
//! * the marked-tile layer (`mark`, `tile`, `blocks`, `synth`, `solver`):
//!   edge-marked square tiles, the fixed catalogues, the block-substitution
//!   calculus that derives the synthesis tables, the per-symbol tile-set
//!   assembler, and a finite-region edge-matching solver used both to
//!   verify patches and to search tori for periodic tilings.
//!
//! Renderers for domino patches and marked patches live in `render`.
//!
//! ```
//! use tilings_core::engine::expand_det;
//! use tilings_core::synth::synthesize;
//! use tilings_core::{census, Symbol};
//!
//! // the rule space: 50625 full symbols in 25380 classes
//! assert_eq!(census().classes, 25380);
//!
//! // one deterministic rule, its supertile, and its enforcing tile set
//! let sym: Symbol = "1101".parse().unwrap();
//! let patch = expand_det(&sym, 2);
//! assert_eq!(patch.len(), 16);
//! assert_eq!(synthesize(&sym).unwrap().len(), 67);
//! ```

pub mod blocks;
pub mod engine;
pub mod error;
pub mod mark;
pub mod render;
pub mod solver;
pub mod symbol;
pub mod synth;
pub mod tile;

pub use error::{ParseError, TileError};
pub use mark::{
    frame_vars, mark_matches, mark_reflect, mark_shift, nim_add, EdgeMark, FramingCode,
};
pub use symbol::{census, prop2_classify, Atom, Census, Slot, Symbol};
pub use tile::{canonical_name, catalogue, Tile, TileName, TileSet};
