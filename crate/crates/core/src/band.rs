use crate::index::Node;

/// The nodes of the dyadic tree with level in `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub lo: usize,
    pub hi: usize,
}

impl Band {
    pub fn new(lo: usize, hi: usize) -> Option<Band> {
        (lo <= hi).then_some(Band { lo, hi })
    }

    pub fn contains(&self, s: &Node) -> bool {
        (self.lo..=self.hi).contains(&s.level())
    }

    pub fn nodes(&self) -> Vec<Node> {
        (self.lo..=self.hi).flat_map(Node::all_at_level).collect()
    }

    pub fn size(&self) -> u64 {
        (1u64 << (self.hi + 1)) - (1u64 << self.lo)
    }

    /// True when every level of `self` lies strictly above every level of `other`.
    pub fn precedes(&self, other: &Band) -> bool {
        self.hi < other.lo
    }
}
