use std::fmt;

use crate::error::CoreError;

/// A node of the dyadic tree, written as a binary string; the root is `""`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Node(String);

impl Node {
    pub fn root() -> Self {
        Node(String::new())
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.bytes().all(|b| b == b'0' || b == b'1').then(|| Node(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Level in the tree; the root has level 0.
    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, bit: u8) -> Node {
        let mut s = self.0.clone();
        s.push(if bit == 0 { '0' } else { '1' });
        Node(s)
    }

    pub fn parent(&self) -> Option<Node> {
        if self.0.is_empty() {
            None
        } else {
            Some(Node(self.0[..self.0.len() - 1].to_string()))
        }
    }

    /// `self ≼ other`: self is an initial part of other.
    pub fn precedes(&self, other: &Node) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Node) -> bool {
        self.precedes(other) || other.precedes(self)
    }

    pub fn prefix(&self, level: usize) -> Node {
        Node(self.0[..level].to_string())
    }

    /// Nodes from `self` down to `t` inclusive; `self` must precede `t`.
    pub fn path_to(&self, t: &Node) -> Vec<Node> {
        debug_assert!(self.precedes(t));
        (self.level()..=t.level()).map(|l| t.prefix(l)).collect()
    }

    pub fn all_at_level(level: usize) -> Vec<Node> {
        (0u64..(1u64 << level))
            .map(|v| {
                let s: String = (0..level)
                    .rev()
                    .map(|b| if v >> b & 1 == 1 { '1' } else { '0' })
                    .collect();
                Node(s)
            })
            .collect()
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    X,
    Y,
}

/// The two lines of the MR scheme: odd naturals and even naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    N1,
    N2,
}

impl Line {
    pub fn of(natural: u64) -> Line {
        if natural % 2 == 1 {
            Line::N1
        } else {
            Line::N2
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Line::N1 => 1,
            Line::N2 => 2,
        }
    }

    pub fn from_number(n: u64) -> Option<Line> {
        match n {
            1 => Some(Line::N1),
            2 => Some(Line::N2),
            _ => None,
        }
    }

    pub fn other(self) -> Line {
        match self {
            Line::N1 => Line::N2,
            Line::N2 => Line::N1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexScheme {
    Natural,
    Dyadic,
    Interleaved(u32),
    MixedSum,
    MrLine,
}

impl fmt::Display for IndexScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexScheme::Natural => write!(f, "natural"),
            IndexScheme::Dyadic => write!(f, "dyadic"),
            IndexScheme::Interleaved(l) => write!(f, "interleaved({l})"),
            IndexScheme::MixedSum => write!(f, "mixed"),
            IndexScheme::MrLine => write!(f, "mrline"),
        }
    }
}

/// A concrete index. Field order fixes the derived ordering: interleaved
/// pairs compare by `(n, i)`, mixed indices by `(n, part, slot, inner)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Nat(u64),
    Node(Node),
    Pair { n: u64, i: u32 },
    Mixed { n: u32, part: Part, slot: u32, inner: u64 },
}

impl Index {
    pub fn pair(i: u32, n: u64) -> Index {
        Index::Pair { n, i }
    }

    pub fn node(s: &str) -> Index {
        Index::Node(Node::parse(s).expect("binary string"))
    }

    pub fn mixed(n: u32, part: Part, slot: u32, inner: u64) -> Index {
        Index::Mixed { n, part, slot, inner }
    }

    pub fn validate(&self, scheme: IndexScheme) -> Result<(), CoreError> {
        let ok = match (scheme, self) {
            (IndexScheme::Natural | IndexScheme::MrLine, Index::Nat(n)) => *n >= 1,
            (IndexScheme::Dyadic, Index::Node(_)) => true,
            (IndexScheme::Interleaved(l), Index::Pair { n, i }) => *i >= 1 && *i <= l && *n >= 1,
            (IndexScheme::MixedSum, Index::Mixed { n, slot, inner, .. }) => {
                *n >= 1 && *slot >= 1 && *slot <= 2 * *n && *inner >= 1
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::MalformedIndex { index: self.to_string(), scheme: scheme.to_string() })
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Nat(n) => write!(f, "{n}"),
            Index::Node(s) => write!(f, "{s}"),
            Index::Pair { n, i } => write!(f, "({i},{n})"),
            Index::Mixed { n, part, slot, inner } => write!(f, "({n},{part:?},{slot},{inner})"),
        }
    }
}
