use scc_core::Word;
use std::collections::HashMap;

/// A solution to the word problem usable for identifying group elements.
pub trait WordSolver: Send + Sync {
    /// A word equal to `w` in the group, empty exactly when `w = 1`.
    fn normalize(&self, w: &Word) -> Word;

    /// A hash of an invariant of the element: equal elements get equal keys.
    fn key(&self, w: &Word) -> u64;

    /// True when [`WordSolver::normalize`] returns one word per element.
    fn canonical(&self) -> bool {
        false
    }

    fn is_trivial(&self, w: &Word) -> bool {
        self.normalize(w).is_empty()
    }

    /// Equality of two normalized words.
    fn same_element(&self, u: &Word, v: &Word) -> bool {
        if self.canonical() {
            u == v
        } else {
            u == v || self.is_trivial(&u.invert().concat(v).free_reduce())
        }
    }
}

/// Group elements stored by representative word, bucketed by
/// [`WordSolver::key`] and told apart inside a bucket by the solver.
#[derive(Clone, Debug, Default)]
pub struct ElementTable {
    reps: Vec<Word>,
    next: Vec<u32>,
    head: HashMap<u64, u32>,
}

const NIL: u32 = u32::MAX;

impl ElementTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, id: usize) -> &Word {
        &self.reps[id]
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    /// Replaces the stored representative; `w` must be the same element.
    pub fn set_rep(&mut self, id: usize, w: Word) {
        self.reps[id] = w;
    }

    /// Looks up a normalized word with its key.
    pub fn find(&self, solver: &dyn WordSolver, w: &Word, key: u64) -> Option<usize> {
        let mut at = self.head.get(&key).copied().unwrap_or(NIL);
        while at != NIL {
            if solver.same_element(&self.reps[at as usize], w) {
                return Some(at as usize);
            }
            at = self.next[at as usize];
        }
        None
    }

    /// Appends an element known to be absent.
    pub fn push(&mut self, w: Word, key: u64) -> usize {
        let id = self.reps.len() as u32;
        let prev = self.head.insert(key, id).unwrap_or(NIL);
        self.next.push(prev);
        self.reps.push(w);
        id as usize
    }

    /// Normalizes `w` and returns its id, inserting it if new.
    pub fn intern(&mut self, solver: &dyn WordSolver, w: &Word) -> (usize, bool) {
        let n = solver.normalize(w);
        let key = solver.key(&n);
        match self.find(solver, &n, key) {
            Some(id) => (id, false),
            None => (self.push(n, key), true),
        }
    }

    /// Normalizes `w` and looks it up.
    pub fn locate(&self, solver: &dyn WordSolver, w: &Word) -> Option<usize> {
        let n = solver.normalize(w);
        self.find(solver, &n, solver.key(&n))
    }
}
