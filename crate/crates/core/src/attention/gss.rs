//! A stack that can branch: several elements may be on top at once, one per
//! live thread, ordered by how recently each thread was touched.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub usize);

#[derive(Debug, Clone)]
struct Element<T> {
    value: T,
    parent: Option<ElementId>,
}

#[derive(Debug, Clone)]
pub struct GraphStructuredStack<T> {
    elements: Vec<Option<Element<T>>>,
    tops: Vec<ElementId>,
}

impl<T> Default for GraphStructuredStack<T> {
    fn default() -> Self {
        Self {
            elements: Vec::new(),
            tops: Vec::new(),
        }
    }
}

impl<T> GraphStructuredStack<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Top elements, most recent first.
    pub fn tops(&self) -> &[ElementId] {
        &self.tops
    }

    pub fn is_empty(&self) -> bool {
        self.tops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.iter().filter(|e| e.is_some()).count()
    }

    pub fn contains(&self, id: ElementId) -> bool {
        matches!(self.elements.get(id.0), Some(Some(_)))
    }

    pub fn value(&self, id: ElementId) -> Option<&T> {
        self.elements.get(id.0)?.as_ref().map(|e| &e.value)
    }

    pub fn parent(&self, id: ElementId) -> Option<ElementId> {
        self.elements.get(id.0)?.as_ref()?.parent
    }

    /// Live element ids in insertion order.
    pub fn ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| ElementId(i))
    }

    fn has_children(&self, id: ElementId) -> bool {
        self.elements.iter().flatten().any(|e| e.parent == Some(id))
    }

    /// `id` followed by its ancestors, bottom last.
    pub fn chain(&self, id: ElementId) -> Vec<ElementId> {
        let mut out = Vec::new();
        let mut at = Some(id);
        while let Some(cur) = at {
            out.push(cur);
            at = self.parent(cur);
        }
        out
    }

    /// Pushes `value` above `parent` (or as a new bottom). The new element
    /// becomes the most salient top. If `parent` was itself a top it is
    /// displaced; otherwise the push opens a new branch and every existing
    /// top stays live.
    pub fn push(&mut self, value: T, parent: Option<ElementId>) -> Result<ElementId> {
        if let Some(p) = parent {
            if !self.contains(p) {
                return Err(Error::UnknownElement(p.0));
            }
        }
        let id = ElementId(self.elements.len());
        self.elements.push(Some(Element { value, parent }));
        if let Some(p) = parent {
            self.tops.retain(|&t| t != p);
        }
        self.tops.insert(0, id);
        Ok(id)
    }

    /// Pops every element strictly above `id` on the most salient branch
    /// through `id`. Elements shared with other branches, `id` itself, its
    /// ancestors and all other branches are untouched. If `id` is left with
    /// no children it becomes the most salient top.
    pub fn pop_through(&mut self, id: ElementId) -> Result<()> {
        if !self.contains(id) {
            return Err(Error::UnknownElement(id.0));
        }
        let Some(&top) = self.tops.iter().find(|&&t| self.chain(t).contains(&id)) else {
            return Err(Error::UnknownElement(id.0));
        };
        if top == id {
            return Ok(());
        }
        let others: Vec<Vec<ElementId>> = self
            .tops
            .iter()
            .filter(|&&t| t != top)
            .map(|&t| self.chain(t))
            .collect();
        for elem in self.chain(top) {
            if elem == id || others.iter().any(|c| c.contains(&elem)) {
                break;
            }
            self.elements[elem.0] = None;
        }
        self.tops.retain(|&t| t != top);
        if !self.has_children(id) {
            self.tops.insert(0, id);
        }
        Ok(())
    }

    /// Tops are exactly the live elements without live children, and every
    /// live element lies below some top.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut leaves: Vec<ElementId> = self.ids().filter(|&e| !self.has_children(e)).collect();
        let mut tops = self.tops.clone();
        leaves.sort();
        tops.sort();
        if leaves != tops {
            return Err(format!("tops {tops:?} differ from leaves {leaves:?}"));
        }
        for e in self.ids() {
            if !self.tops.iter().any(|&t| self.chain(t).contains(&e)) {
                return Err(format!("element {} unreachable from any top", e.0));
            }
        }
        Ok(())
    }
}
