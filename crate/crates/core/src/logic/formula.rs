use std::collections::BTreeSet;

/// Modal formulas over the operations and elements of `D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    /// An element of `D`, by index.
    Const(usize),
    /// An operation of `D`, by index, with its arguments.
    Op(usize, Vec<Formula>),
    /// `tau_d`, for `d` other than the bottom.
    Tau(usize, Box<Formula>),
    /// `T_d`.
    Tcap(usize, Box<Formula>),
    /// `kappa_d`, for `d` other than the top.
    Kappa(usize, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Nabla(Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn boxed(self) -> Formula {
        Formula::Box(Box::new(self))
    }

    pub fn diamond(self) -> Formula {
        Formula::Diamond(Box::new(self))
    }

    pub fn nabla(self) -> Formula {
        Formula::Nabla(Box::new(self))
    }

    /// Nesting depth of modal operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 0,
            Formula::Op(_, args) => args.iter().map(Formula::modal_depth).max().unwrap_or(0),
            Formula::Tau(_, f) | Formula::Tcap(_, f) | Formula::Kappa(_, f) => f.modal_depth(),
            Formula::Box(f) | Formula::Diamond(f) | Formula::Nabla(f) => 1 + f.modal_depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Op(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
            Formula::Tau(_, f)
            | Formula::Tcap(_, f)
            | Formula::Kappa(_, f)
            | Formula::Box(f)
            | Formula::Diamond(f)
            | Formula::Nabla(f) => 1 + f.size(),
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Var(v) => {
                out.insert(v);
            }
            Formula::Const(_) => {}
            Formula::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Tau(_, f)
            | Formula::Tcap(_, f)
            | Formula::Kappa(_, f)
            | Formula::Box(f)
            | Formula::Diamond(f)
            | Formula::Nabla(f) => f.collect_vars(out),
        }
    }
}
