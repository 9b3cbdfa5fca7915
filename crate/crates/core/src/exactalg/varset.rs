use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, AlgebraResult};
use crate::exactalg::monomial::MAX_VARS;

/// An ordered list of distinct variable names.
///
/// The order fixes the graded-lex monomial order: earlier names compare
/// larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> AlgebraResult<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables {
                max: MAX_VARS,
                got: names.len(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(AlgebraError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Arc::new(VarSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> AlgebraResult<usize> {
        self.index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(", "))
    }
}

pub(crate) fn ensure_same(left: &Arc<VarSet>, right: &Arc<VarSet>) -> AlgebraResult<()> {
    if Arc::ptr_eq(left, right) || left == right {
        Ok(())
    } else {
        Err(AlgebraError::VarSetMismatch {
            left: left.to_string(),
            right: right.to_string(),
        })
    }
}
