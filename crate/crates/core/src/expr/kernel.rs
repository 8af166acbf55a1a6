use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::ratfunc::Name;
use super::Expr;
use crate::jet::MultiIndex;

/// An indeterminate of the expression ring: a base coordinate, a jet
/// coordinate, an applied function symbol or an exponential.
///
/// Kernels compare, order and hash by their canonical printed form.
#[derive(Clone)]
pub struct Kernel(Arc<KernelData>);

struct KernelData {
    kind: KernelKind,
    key: Box<str>,
}

#[derive(Clone, Debug)]
pub enum KernelKind {
    /// Independent variable `x^i`.
    Base { index: usize },
    /// Jet coordinate `p^dep_sigma`.
    Jet { dep: usize, sigma: MultiIndex },
    /// `name^(order)(arg)` for a declared function symbol.
    Func { name: Name, order: u32, arg: Expr },
    /// `exp(arg)`.
    Exp { arg: Expr },
}

impl Kernel {
    pub(crate) fn base(name: &str, index: usize) -> Kernel {
        Kernel(Arc::new(KernelData {
            kind: KernelKind::Base { index },
            key: name.into(),
        }))
    }

    pub(crate) fn jet(dep_name: &str, dep: usize, sigma: MultiIndex, independent: &[String]) -> Kernel {
        let mut key = String::from(dep_name);
        if !sigma.is_zero() {
            key.push('_');
            for (i, &c) in sigma.entries().iter().enumerate() {
                for _ in 0..c {
                    key.push_str(&independent[i]);
                }
            }
        }
        Kernel(Arc::new(KernelData {
            kind: KernelKind::Jet { dep, sigma },
            key: key.into(),
        }))
    }

    pub(crate) fn func(name: Name, order: u32, arg: Expr) -> Kernel {
        let mut key = String::from(&*name);
        match order {
            0 => {}
            1..=3 => key.extend(std::iter::repeat_n('\'', order as usize)),
            _ => key.push_str(&format!("^({order})")),
        }
        key.push('(');
        key.push_str(&arg.to_string());
        key.push(')');
        Kernel(Arc::new(KernelData {
            kind: KernelKind::Func { name, order, arg },
            key: key.into(),
        }))
    }

    /// Raw exponential kernel; callers normalize `arg` first (see
    /// [`Expr::exp`]).
    pub(crate) fn exp(arg: Expr) -> Kernel {
        let key = format!("exp({arg})");
        Kernel(Arc::new(KernelData {
            kind: KernelKind::Exp { arg },
            key: key.into(),
        }))
    }

    pub fn kind(&self) -> &KernelKind {
        &self.0.kind
    }

    /// Canonical printed form.
    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.0.kind, KernelKind::Jet { .. })
    }

    pub fn as_jet(&self) -> Option<(usize, &MultiIndex)> {
        match &self.0.kind {
            KernelKind::Jet { dep, sigma } => Some((*dep, sigma)),
            _ => None,
        }
    }

    /// Argument of a function or exponential kernel.
    pub fn arg(&self) -> Option<&Expr> {
        match &self.0.kind {
            KernelKind::Func { arg, .. } | KernelKind::Exp { arg } => Some(arg),
            _ => None,
        }
    }
}

impl PartialEq for Kernel {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.key == other.0.key
    }
}

impl Eq for Kernel {}

impl PartialOrd for Kernel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Kernel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.key.cmp(&other.0.key)
    }
}

impl Hash for Kernel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state);
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.key)
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({})", self.0.key)
    }
}
