//! Four-channel edge markings and the nim-addition framing group.
//!
//! A marking `(a b c d)` has a direction channel `a` (in/out), a sidedness
//! channel `b`, a structure digit `c` and a framing digit `d`. The framing
//! digits live in `Z2 (+) Z2` under carry-free addition and act on the
//! symmetries of a domino. In the first tile catalogue the `d` channel is
//! unused and suppressed.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A framing digit 0..=3, an element of `Z2 (+) Z2` under nim addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FramingCode(u8);

impl FramingCode {
    pub const ALL: [FramingCode; 4] = [
        FramingCode(0),
        FramingCode(1),
        FramingCode(2),
        FramingCode(3),
    ];

    pub fn new(v: u8) -> FramingCode {
        assert!(v < 4, "framing code out of range: {v}");
        FramingCode(v)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// Carry-free binary addition: bits add independently mod 2.
pub fn nim_add(x: FramingCode, y: FramingCode) -> FramingCode {
    FramingCode(x.0 ^ y.0)
}

/// The generic framings `b`, `q`, `p` that accompany a generic `d`.
///
/// They are the three nonzero nim-translates of `d`; together with `d` they
/// exhaust all four framing digits.
pub fn frame_vars(d: FramingCode) -> (FramingCode, FramingCode, FramingCode) {
    (
        nim_add(d, FramingCode(1)),
        nim_add(d, FramingCode(2)),
        nim_add(d, FramingCode(3)),
    )
}

/// Direction channel: every marking points out of or into its tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Out,
    In,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Out => Dir::In,
            Dir::In => Dir::Out,
        }
    }
}

/// Sidedness channel: unsided, or balanced to one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Zero,
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Zero => Side::Zero,
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// An edge marking `(a b c d)`.
///
/// `d` is `None` for markings of first-catalogue tiles, where the framing
/// channel is suppressed; a tile never mixes the two contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeMark {
    pub dir: Dir,
    pub side: Side,
    pub class: u8,
    pub frame: Option<FramingCode>,
}

impl EdgeMark {
    pub fn new(dir: Dir, side: Side, class: u8, frame: Option<FramingCode>) -> EdgeMark {
        assert!(class < 4, "structure digit out of range: {class}");
        EdgeMark {
            dir,
            side,
            class,
            frame,
        }
    }

    /// The plain outward marking `(+)`, shorthand for `(+000)`.
    pub fn plus(frame_present: bool) -> EdgeMark {
        EdgeMark::new(
            Dir::Out,
            Side::Zero,
            0,
            frame_present.then_some(FramingCode(0)),
        )
    }

    /// The plain inward marking `(-)`.
    pub fn minus(frame_present: bool) -> EdgeMark {
        EdgeMark::new(
            Dir::In,
            Side::Zero,
            0,
            frame_present.then_some(FramingCode(0)),
        )
    }

    pub fn is_plain(&self) -> bool {
        self.side == Side::Zero && self.class == 0 && self.frame.is_none_or(|f| f.0 == 0)
    }

    /// True when this mark belongs to the second catalogue (framing present).
    pub fn has_frame(&self) -> bool {
        self.frame.is_some()
    }
}

/// Two markings fit together iff the `(ab)` channels sum to zero and the
/// `(cd)` channels are equal.
pub fn mark_matches(m: &EdgeMark, m2: &EdgeMark) -> bool {
    // marks from different catalogue contexts never match: the frame
    // fields compare unequal when only one is present
    m.dir == m2.dir.flip() && m.side == m2.side.flip() && m.class == m2.class && m.frame == m2.frame
}

/// Reflecting a tile negates the sidedness channel of each of its marks.
pub fn mark_reflect(m: &EdgeMark) -> EdgeMark {
    EdgeMark {
        side: m.side.flip(),
        ..*m
    }
}

/// Nim-add `k` to the framing channel; the plain marks are fixed.
///
/// Only defined for second-catalogue marks.
pub fn mark_shift(m: &EdgeMark, k: FramingCode) -> Result<EdgeMark, ParseError> {
    let Some(f) = m.frame else {
        return Err(ParseError::new(
            "cannot shift a mark with no framing channel",
        ));
    };
    if m.is_plain() {
        return Ok(*m);
    }
    Ok(EdgeMark {
        frame: Some(nim_add(f, k)),
        ..*m
    })
}

impl fmt::Display for EdgeMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // only the frameless plain marks abbreviate to bare signs; the
        // framed ones keep their digits so the codec stays bit-exact
        if self.side == Side::Zero && self.class == 0 && self.frame.is_none() {
            return write!(f, "{}", if self.dir == Dir::Out { "+" } else { "-" });
        }
        write!(
            f,
            "{}{}{}",
            if self.dir == Dir::Out { "+" } else { "-" },
            match self.side {
                Side::Zero => "0",
                Side::Plus => "+",
                Side::Minus => "-",
            },
            self.class
        )?;
        if let Some(fr) = self.frame {
            write!(f, "{}", fr.0)?;
        }
        Ok(())
    }
}

impl FromStr for EdgeMark {
    type Err = ParseError;

    /// Grammar: `MARK := "+" | "-" | SIGN SIDE C [D]` with `SIGN` in `+-`,
    /// `SIDE` in `0+-`, `C`,`D` digits 0..=3. An omitted `D` means the
    /// framing channel is absent.
    fn from_str(s: &str) -> Result<EdgeMark, ParseError> {
        let chars: Vec<char> = s.chars().collect();
        match chars.len() {
            1 => match chars[0] {
                '+' => Ok(EdgeMark::new(Dir::Out, Side::Zero, 0, None)),
                '-' => Ok(EdgeMark::new(Dir::In, Side::Zero, 0, None)),
                c => Err(ParseError::at(format!("bad mark sign {c:?}"), 0)),
            },
            3 | 4 => {
                let dir = match chars[0] {
                    '+' => Dir::Out,
                    '-' => Dir::In,
                    c => return Err(ParseError::at(format!("bad mark sign {c:?}"), 0)),
                };
                let side = match chars[1] {
                    '0' => Side::Zero,
                    '+' => Side::Plus,
                    '-' => Side::Minus,
                    c => return Err(ParseError::at(format!("bad sidedness {c:?}"), 1)),
                };
                let class = digit(chars[2], 2)?;
                let frame = if chars.len() == 4 {
                    Some(FramingCode(digit(chars[3], 3)?))
                } else {
                    None
                };
                Ok(EdgeMark::new(dir, side, class, frame))
            }
            n => Err(ParseError::new(format!("mark of length {n}: {s:?}"))),
        }
    }
}

fn digit(c: char, pos: usize) -> Result<u8, ParseError> {
    match c {
        '0'..='3' => Ok(c as u8 - b'0'),
        _ => Err(ParseError::at(
            format!("expected digit 0-3, got {c:?}"),
            pos,
        )),
    }
}
