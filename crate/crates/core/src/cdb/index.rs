use rustc_hash::FxHashMap as HashMap;

/// Handle to a node of the name index. Node 0 is the root (empty sequence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<String, u32>,
    /// Concepts whose name ends here, ascending.
    concepts: Vec<u32>,
    abbreviation: bool,
}

/// Token-sequence trie over every indexed name.
///
/// A node with concepts is an exact name; a node with children is a proper
/// prefix of a longer name. Both views are therefore always consistent.
#[derive(Debug, Clone)]
pub struct NameIndex {
    nodes: Vec<Node>,
    names: usize,
    max_len: usize,
}

impl Default for NameIndex {
    fn default() -> Self {
        NameIndex {
            nodes: vec![Node::default()],
            names: 0,
            max_len: 0,
        }
    }
}

impl NameIndex {
    pub fn insert<S: AsRef<str>>(&mut self, tokens: &[S], concept: u32, abbreviation: bool) {
        assert!(!tokens.is_empty(), "empty names are never indexed");
        let mut node = 0usize;
        for t in tokens {
            let t = t.as_ref();
            node = match self.nodes[node].children.get(t) {
                Some(&c) => c as usize,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[node].children.insert(t.to_owned(), id as u32);
                    id
                }
            };
        }
        let n = &mut self.nodes[node];
        if n.concepts.is_empty() {
            self.names += 1;
        }
        if let Err(pos) = n.concepts.binary_search(&concept) {
            n.concepts.insert(pos, concept);
        }
        n.abbreviation |= abbreviation;
        self.max_len = self.max_len.max(tokens.len());
    }

    pub fn step(&self, node: NodeId, token: &str) -> Option<NodeId> {
        self.nodes[node.0 as usize]
            .children
            .get(token)
            .map(|&c| NodeId(c))
    }

    pub fn find<S: AsRef<str>>(&self, tokens: &[S]) -> Option<NodeId> {
        tokens
            .iter()
            .try_fold(NodeId::ROOT, |node, t| self.step(node, t.as_ref()))
    }

    /// Concept indices of the name ending at `node`.
    pub fn concepts(&self, node: NodeId) -> &[u32] {
        &self.nodes[node.0 as usize].concepts
    }

    pub fn has_extensions(&self, node: NodeId) -> bool {
        !self.nodes[node.0 as usize].children.is_empty()
    }

    pub fn is_abbreviation(&self, node: NodeId) -> bool {
        self.nodes[node.0 as usize].abbreviation
    }

    /// Number of distinct indexed token sequences.
    pub fn name_count(&self) -> usize {
        self.names
    }

    /// Length in tokens of the longest indexed name.
    pub fn max_name_len(&self) -> usize {
        self.max_len
    }
}
