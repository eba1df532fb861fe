//! The `stuv` symbol calculus for domino substitution rules.
//!
//! A symbol is a quadruple of digit subsets; each subset lists the allowed
//! orientations of one of the four children of a doubled domino. Full
//! symbols (no empty digit) define substitution rules; deterministic ones
//! (all singletons) define a single rule.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;
use crate::mark::FramingCode;

/// One digit position: a subset of {0,1,2,3} stored as a 4-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitSet(u8);

impl DigitSet {
    pub const EMPTY: DigitSet = DigitSet(0);
    pub const FULL: DigitSet = DigitSet(0b1111);

    pub fn singleton(d: u8) -> DigitSet {
        assert!(d < 4);
        DigitSet(1 << d)
    }

    pub fn from_mask(mask: u8) -> DigitSet {
        assert!(mask < 16);
        DigitSet(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, d: u8) -> bool {
        self.0 >> d & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..4).filter(move |d| self.contains(*d))
    }

    pub fn map(self, f: impl Fn(u8) -> u8) -> DigitSet {
        let mut out = 0;
        for d in self.iter() {
            out |= 1 << f(d);
        }
        DigitSet(out)
    }
}

/// The four child slots of a doubled domino, in symbol order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    S,
    T,
    U,
    V,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::S, Slot::T, Slot::U, Slot::V];

    pub fn index(self) -> usize {
        match self {
            Slot::S => 0,
            Slot::T => 1,
            Slot::U => 2,
            Slot::V => 3,
        }
    }

    /// The slot this one trades places with under the framing ambiguity.
    pub fn swapped(self) -> Slot {
        match self {
            Slot::S => Slot::T,
            Slot::T => Slot::S,
            s => s,
        }
    }
}

/// A substitution symbol: four digit subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub [DigitSet; 4]);

/// An atomic symbol: one slot carrying one digit, the rest empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub slot: Slot,
    pub digit: u8,
}

impl Atom {
    pub fn new(slot: Slot, digit: u8) -> Atom {
        assert!(digit < 4);
        Atom { slot, digit }
    }

    pub const fn all() -> [Atom; 16] {
        let mut out = [Atom {
            slot: Slot::S,
            digit: 0,
        }; 16];
        let slots = [Slot::S, Slot::T, Slot::U, Slot::V];
        let mut i = 0;
        while i < 16 {
            out[i] = Atom {
                slot: slots[i / 4],
                digit: (i % 4) as u8,
            };
            i += 1;
        }
        out
    }

    /// The atom this one corresponds to under the framing ambiguity.
    pub fn partner(self) -> Atom {
        Atom {
            slot: self.slot.swapped(),
            digit: self.digit ^ 3,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for slot in Slot::ALL {
            if slot == self.slot {
                write!(f, "{}", self.digit)?;
            } else {
                write!(f, ".")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolClass {
    Full,
    Deterministic,
    Atomic,
    Partial,
}

impl Symbol {
    pub fn deterministic(s: u8, t: u8, u: u8, v: u8) -> Symbol {
        Symbol([
            DigitSet::singleton(s),
            DigitSet::singleton(t),
            DigitSet::singleton(u),
            DigitSet::singleton(v),
        ])
    }

    pub fn slot(&self, slot: Slot) -> DigitSet {
        self.0[slot.index()]
    }

    pub fn is_full(&self) -> bool {
        self.0.iter().all(|d| !d.is_empty())
    }

    pub fn is_deterministic(&self) -> bool {
        self.0.iter().all(|d| d.len() == 1)
    }

    pub fn is_atomic(&self) -> bool {
        self.0.iter().filter(|d| d.len() == 1).count() == 1
            && self.0.iter().filter(|d| d.is_empty()).count() == 3
    }

    pub fn classify(&self) -> SymbolClass {
        if self.is_deterministic() {
            SymbolClass::Deterministic
        } else if self.is_full() {
            SymbolClass::Full
        } else if self.is_atomic() {
            SymbolClass::Atomic
        } else {
            SymbolClass::Partial
        }
    }

    /// The digits of a deterministic symbol, in slot order.
    pub fn digits(&self) -> Option<[u8; 4]> {
        if !self.is_deterministic() {
            return None;
        }
        let mut out = [0; 4];
        for (i, ds) in self.0.iter().enumerate() {
            out[i] = ds.iter().next().unwrap();
        }
        Some(out)
    }

    /// The atomic symbols contained in this one: one per (slot, digit).
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for slot in Slot::ALL {
            for d in self.slot(slot).iter() {
                out.push(Atom::new(slot, d));
            }
        }
        out
    }

    /// The deterministic symbols refining a full symbol: the product of the
    /// four digit subsets.
    pub fn det_components(&self) -> Result<Vec<Symbol>, ParseError> {
        if !self.is_full() {
            return Err(ParseError::new("det_components requires a full symbol"));
        }
        let mut out = Vec::new();
        for s in self.0[0].iter() {
            for t in self.0[1].iter() {
                for u in self.0[2].iter() {
                    for v in self.0[3].iter() {
                        out.push(Symbol::deterministic(s, t, u, v));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nim-add `k` to every digit, elementwise.
    pub fn shift(&self, k: FramingCode) -> Symbol {
        Symbol(self.0.map(|d| d.map(|x| x ^ k.value())))
    }

    /// The paired symbol under the two-fold framing ambiguity:
    /// `(stuv)' = (tsuv) + 3`.
    pub fn partner(&self) -> Symbol {
        let sh = |d: DigitSet| d.map(|x| x ^ 3);
        Symbol([sh(self.0[1]), sh(self.0[0]), sh(self.0[2]), sh(self.0[3])])
    }

    pub fn equivalent(&self, other: &Symbol) -> bool {
        self == other || self.partner() == *other
    }

    /// The lexicographically smaller of a symbol and its partner, under the
    /// canonical spelling.
    pub fn canonical_rep(&self) -> Symbol {
        let p = self.partner();
        if p.to_string() < self.to_string() {
            p
        } else {
            *self
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ds in self.0 {
            if ds.is_empty() {
                write!(f, ".")?;
            } else if ds == DigitSet::FULL {
                write!(f, "*")?;
            } else if ds.len() == 1 {
                write!(f, "{}", ds.iter().next().unwrap())?;
            } else {
                write!(f, "(")?;
                for d in ds.iter() {
                    write!(f, "{d}")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Symbol {
    type Err = ParseError;

    /// Grammar: four fields, each `DIGIT`, `.`, `*` or `(DIGIT+)`.
    fn from_str(s: &str) -> Result<Symbol, ParseError> {
        let chars: Vec<char> = s.chars().collect();
        let mut fields = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                '.' | '\u{b7}' => {
                    fields.push(DigitSet::EMPTY);
                    i += 1;
                }
                '*' => {
                    fields.push(DigitSet::FULL);
                    i += 1;
                }
                '0'..='3' => {
                    fields.push(DigitSet::singleton(chars[i] as u8 - b'0'));
                    i += 1;
                }
                '(' => {
                    let mut mask = 0u8;
                    i += 1;
                    while i < chars.len() && chars[i] != ')' {
                        match chars[i] {
                            '0'..='3' => mask |= 1 << (chars[i] as u8 - b'0'),
                            c => return Err(ParseError::at(format!("bad digit {c:?}"), i)),
                        }
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(ParseError::at("unclosed digit set", i));
                    }
                    if mask == 0 {
                        return Err(ParseError::at("empty parenthesised digit set", i));
                    }
                    fields.push(DigitSet::from_mask(mask));
                    i += 1;
                }
                c => return Err(ParseError::at(format!("bad symbol field {c:?}"), i)),
            }
        }
        if fields.len() != 4 {
            return Err(ParseError::new(format!(
                "symbol needs exactly 4 fields, got {}",
                fields.len()
            )));
        }
        Ok(Symbol([fields[0], fields[1], fields[2], fields[3]]))
    }
}

/// Exhaustive census of full symbols up to the pairing equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub full: u64,
    pub self_paired: u64,
    pub classes: u64,
    pub det_symbols: u64,
    pub det_classes: u64,
}

/// Enumerate all full symbols and count equivalence classes directly.
///
/// The closed formula `(full - self_paired)/2 + self_paired` is asserted
/// against the enumeration rather than trusted.
pub fn census() -> Census {
    let mut full = 0u64;
    let mut self_paired = 0u64;
    let mut classes = 0u64;
    let mut det_symbols = 0u64;
    let mut det_classes = 0u64;
    for s in 1..16u8 {
        for t in 1..16u8 {
            for u in 1..16u8 {
                for v in 1..16u8 {
                    let sym = Symbol([
                        DigitSet::from_mask(s),
                        DigitSet::from_mask(t),
                        DigitSet::from_mask(u),
                        DigitSet::from_mask(v),
                    ]);
                    full += 1;
                    let det = sym.is_deterministic();
                    if det {
                        det_symbols += 1;
                    }
                    let p = sym.partner();
                    if p == sym {
                        self_paired += 1;
                        classes += 1;
                        if det {
                            det_classes += 1;
                        }
                    } else if canonical_key(&sym) < canonical_key(&p) {
                        // count each two-element class at its smaller member
                        classes += 1;
                        if det {
                            det_classes += 1;
                        }
                    }
                }
            }
        }
    }
    let computed = Census {
        full,
        self_paired,
        classes,
        det_symbols,
        det_classes,
    };
    debug_assert_eq!(
        computed.classes,
        (computed.full - computed.self_paired) / 2 + computed.self_paired
    );
    computed
}

fn canonical_key(s: &Symbol) -> [u8; 4] {
    [s.0[0].mask(), s.0[1].mask(), s.0[2].mask(), s.0[3].mask()]
}

/// How a full symbol relates to the non-unique-decomposition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    NotApplicable,
    PeriodicNonUnique,
    NonPeriodicNonUnique,
}

/// Classify a full symbol against the `s = t`, `u = v` families with
/// digits in {0,1,2,3,(02),(13)}.
pub fn prop2_classify(sym: &Symbol) -> Result<FamilyKind, ParseError> {
    if !sym.is_full() {
        return Err(ParseError::new(
            "family classification requires a full symbol",
        ));
    }
    let allowed = |d: DigitSet| d.len() == 1 || d.mask() == 0b0101 || d.mask() == 0b1010;
    let s = sym.0[0];
    let u = sym.0[2];
    if sym.0[0] != sym.0[1] || sym.0[2] != sym.0[3] || !allowed(s) || !allowed(u) {
        return Ok(FamilyKind::NotApplicable);
    }
    if s == u {
        Ok(FamilyKind::PeriodicNonUnique)
    } else {
        Ok(FamilyKind::NonPeriodicNonUnique)
    }
}

/// The members of the non-unique-decomposition families, grouped into
/// shift quadruples `{S, S+1, S+2, S+3}`.
pub fn prop2_quadruples() -> Vec<[Symbol; 4]> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let pool: Vec<DigitSet> = (0..4u8)
        .map(DigitSet::singleton)
        .chain([DigitSet::from_mask(0b0101), DigitSet::from_mask(0b1010)])
        .collect();
    for &s in &pool {
        for &u in &pool {
            let sym = Symbol([s, s, u, u]);
            if seen.contains(&sym) {
                continue;
            }
            let quad = [
                sym,
                sym.shift(FramingCode::new(1)),
                sym.shift(FramingCode::new(2)),
                sym.shift(FramingCode::new(3)),
            ];
            for q in quad {
                seen.insert(q);
            }
            out.push(quad);
        }
    }
    out
}
