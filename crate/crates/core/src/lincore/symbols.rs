use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// What a symbolic constant stands for. Only used for documentation and
/// grouping in serialized output; the engine treats every kind alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Dimension,
    LinkRank,
    CompositeRank,
    Opaque,
}

impl SymbolKind {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            SymbolKind::Dimension => Some("dimension"),
            SymbolKind::LinkRank => Some("link-rank"),
            SymbolKind::CompositeRank => Some("composite-rank"),
            SymbolKind::Opaque => None,
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "dimension" => Some(SymbolKind::Dimension),
            "link-rank" => Some(SymbolKind::LinkRank),
            "composite-rank" => Some(SymbolKind::CompositeRank),
            "opaque" => Some(SymbolKind::Opaque),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolClass {
    Variable,
    Constant,
}

/// Declared variables and symbolic constants.
///
/// Declaration order is the canonical order: variables first, then
/// constants. Names are unique across both lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    variables: Vec<String>,
    constants: Vec<(String, SymbolKind)>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_variable(&mut self, name: &str) -> Result<()> {
        if self.class_of(name).is_some() {
            return Err(Error::DuplicateDeclaration(name.to_string()));
        }
        self.variables.push(name.to_string());
        Ok(())
    }

    pub fn declare_constant(&mut self, name: &str, kind: SymbolKind) -> Result<()> {
        if self.class_of(name).is_some() {
            return Err(Error::DuplicateDeclaration(name.to_string()));
        }
        self.constants.push((name.to_string(), kind));
        Ok(())
    }

    pub fn with_variables<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        for n in names {
            self.declare_variable(n.as_ref())?;
        }
        Ok(self)
    }

    pub fn with_constants<S: AsRef<str>>(mut self, names: &[S], kind: SymbolKind) -> Result<Self> {
        for n in names {
            self.declare_constant(n.as_ref(), kind)?;
        }
        Ok(self)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constants(&self) -> &[(String, SymbolKind)] {
        &self.constants
    }

    pub fn constant_names(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(|(n, _)| n.as_str())
    }

    pub fn class_of(&self, name: &str) -> Option<SymbolClass> {
        if self.variables.iter().any(|v| v == name) {
            Some(SymbolClass::Variable)
        } else if self.constants.iter().any(|(c, _)| c == name) {
            Some(SymbolClass::Constant)
        } else {
            None
        }
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.class_of(name) == Some(SymbolClass::Variable)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.class_of(name) == Some(SymbolClass::Constant)
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        self.constants.iter().find(|(c, _)| c == name).map(|(_, k)| *k)
    }

    /// Position in canonical order (variables, then constants).
    pub fn position(&self, name: &str) -> Option<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .or_else(|| {
                self.constants
                    .iter()
                    .position(|(c, _)| c == name)
                    .map(|i| i + self.variables.len())
            })
    }

    pub fn len(&self) -> usize {
        self.variables.len() + self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn without_variable(&self, name: &str) -> SymbolTable {
        SymbolTable {
            variables: self.variables.iter().filter(|v| *v != name).cloned().collect(),
            constants: self.constants.clone(),
        }
    }

    pub fn without_constants(&self) -> SymbolTable {
        SymbolTable {
            variables: self.variables.clone(),
            constants: Vec::new(),
        }
    }

    /// Same variable names and same constant names, ignoring order and kinds.
    pub fn same_symbols(&self, other: &SymbolTable) -> bool {
        let vars = |t: &SymbolTable| t.variables.iter().cloned().collect::<BTreeSet<_>>();
        let consts = |t: &SymbolTable| t.constant_names().map(str::to_string).collect::<BTreeSet<_>>();
        vars(self) == vars(other) && consts(self) == consts(other)
    }
}
