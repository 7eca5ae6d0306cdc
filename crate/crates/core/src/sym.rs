//! Cheap shared strings for node identifiers, features and node labels.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// A symbol: node identifier, edge feature, or node label / proposition.
///
/// Ordering and hashing follow the underlying string, so collections keyed
/// by `Sym` iterate in a deterministic, name-lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: impl AsRef<str>) -> Self {
        Sym(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Symbols in the `$` namespace are reserved for encoder-generated
    /// markers and are rejected by all user-facing parsers.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('$')
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

impl Borrow<str> for Sym {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Sym {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Shorthand used throughout the tests.
pub fn sym(s: &str) -> Sym {
    Sym::new(s)
}
