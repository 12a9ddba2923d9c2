use std::fmt;
use std::path::Path;
use std::sync::Arc;

use super::{
    kb_complete, Alphabet, BraidModel, CayleyGraph, ConfluenceStatus, FreeBasisModel, FreeGroup,
    FreeProduct, GeneratorLabel, GroupModel, Heisenberg, Hex, KbBounds, Presentation,
    RewritingModel, Zd,
};
use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, Ladder, NeighborOracle};

/// A built-in graph or group named as `name` or `name:param,param`.
/// File-backed graphs (`finite_graph:PATH`, `presentation:PATH`) take the
/// whole remainder as a single path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphDescriptor {
    pub name: String,
    pub params: Vec<String>,
}

const NAMES: &[&str] = &[
    "zd",
    "free",
    "free_product",
    "hex",
    "heisenberg",
    "braid",
    "one_relator_example",
    "one_relator_free_basis",
    "gamma1",
    "gamma2",
    "finite_graph",
    "presentation",
];

impl GraphDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (text, None),
        };
        if !NAMES.contains(&name) {
            return Err(Error::UnknownBuiltin(name.to_string()));
        }
        let params = match rest {
            None => Vec::new(),
            Some(r) if matches!(name, "finite_graph" | "presentation") => vec![r.to_string()],
            Some(r) => r.split(',').map(|p| p.trim().to_string()).collect(),
        };
        Ok(GraphDescriptor {
            name: name.to_string(),
            params,
        })
    }

    fn int_param(&self, i: usize, default: Option<usize>) -> Result<usize> {
        match self.params.get(i) {
            Some(p) => p
                .parse()
                .map_err(|_| Error::invalid(format!("{}: parameter {p:?} is not an integer", self.name))),
            None => default.ok_or_else(|| Error::invalid(format!("{} needs a parameter", self.name))),
        }
    }

    fn no_params(&self) -> Result<()> {
        if self.params.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{} takes no parameters", self.name)))
        }
    }

    fn path(&self) -> Result<&Path> {
        match self.params.as_slice() {
            [p] if !p.is_empty() => Ok(Path::new(p)),
            _ => Err(Error::invalid(format!("{} needs a file path", self.name))),
        }
    }
}

impl fmt::Display for GraphDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}:{}", self.name, self.params.join(","))
        }
    }
}

/// `<a, b, c, d | a b a^-1 d c d^-1>`.
pub fn one_relator_presentation() -> Presentation {
    Presentation::new("one_relator_example", Alphabet::standard(4), &["abAdcD"]).expect("valid")
}

/// The one-relator group as a free group on `a, c, d`, using
/// `b = a^-1 d c^-1 d^-1 a` from the relator.
pub fn one_relator_free_basis() -> FreeBasisModel {
    let base = Alphabet::new(['a', 'c', 'd'].map(GeneratorLabel::standard).to_vec()).expect("valid");
    FreeBasisModel::new(
        "one_relator_free_basis",
        base,
        Alphabet::standard(4),
        &["a", "AdCDa", "c", "d"],
    )
    .expect("valid")
}

/// Finite presentation of a built-in group, where one is known.
pub fn builtin_presentation(desc: &GraphDescriptor) -> Result<Presentation> {
    let name = desc.to_string();
    match desc.name.as_str() {
        "zd" => {
            let d = desc.int_param(0, Some(2))?;
            let a = Alphabet::standard(d);
            let syms: Vec<char> = a.generators().iter().map(|g| g.symbol).collect();
            let mut rels = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    let (x, y) = (syms[i], syms[j]);
                    rels.push(format!("{x}{y}{}{}", x.to_ascii_uppercase(), y.to_ascii_uppercase()));
                }
            }
            let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
            Presentation::new(name, a, &rels)
        }
        "free" => Presentation::new(name, Alphabet::standard(desc.int_param(0, None)?), &[]),
        "free_product" => {
            let model = builtin_free_product(desc)?;
            let a = model.alphabet().clone();
            let rels: Vec<String> = a
                .generators()
                .iter()
                .zip(model.orders())
                .filter(|(_, &o)| o > 2)
                .map(|(g, &o)| std::iter::repeat(g.symbol).take(o as usize).collect())
                .collect();
            let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
            Presentation::new(name, a, &rels)
        }
        // c = b a^-1 and ab = ba
        "hex" => Presentation::new(name, Hex::new().alphabet().clone(), &["abAB", "caB"]),
        "heisenberg" => {
            let h = builtin_heisenberg(desc)?;
            let mut rels = vec!["aabABAbaBA", "babABaBA"];
            if h.alphabet().len() == 6 {
                rels = vec!["abABC", "acAC", "bcBC"];
            }
            Presentation::new(name, h.alphabet().clone(), &rels)
        }
        "one_relator_example" => {
            desc.no_params()?;
            Ok(one_relator_presentation())
        }
        "presentation" => Presentation::load(desc.path()?),
        other => Err(Error::invalid(format!("{other} has no built-in presentation"))),
    }
}

fn builtin_free_product(desc: &GraphDescriptor) -> Result<FreeProduct> {
    if desc.params.is_empty() {
        return Err(Error::invalid("free_product needs factor orders"));
    }
    let orders = (0..desc.params.len())
        .map(|i| desc.int_param(i, None).map(|o| o as u32))
        .collect::<Result<Vec<_>>>()?;
    FreeProduct::new(&orders)
}

fn builtin_heisenberg(desc: &GraphDescriptor) -> Result<Heisenberg> {
    match desc.params.as_slice() {
        [] => Ok(Heisenberg::standard()),
        [p] if p == "std" => Ok(Heisenberg::standard()),
        [p] if p == "extended" => Ok(Heisenberg::extended()),
        _ => Err(Error::invalid("heisenberg takes std or extended")),
    }
}

/// Completes a presentation and wraps the result as a group model, failing
/// with a diagnostic if confluence is not verified.
pub fn rewriting_model(p: &Presentation, bounds: KbBounds) -> Result<RewritingModel> {
    let rs = kb_complete(p, bounds)?;
    match rs.status() {
        ConfluenceStatus::Verified => RewritingModel::new(p.name(), rs),
        ConfluenceStatus::Unverified { reason } => Err(Error::Unverified(format!(
            "{}: completion stopped with {} rules ({reason}); ball enumeration disabled",
            p.name(),
            rs.rules().len()
        ))),
        ConfluenceStatus::Refuted { .. } => RewritingModel::new(p.name(), rs),
    }
}

/// The group model behind a built-in descriptor.
pub fn builtin_model(desc: &GraphDescriptor) -> Result<Arc<dyn GroupModel>> {
    Ok(match desc.name.as_str() {
        "zd" => {
            let d = desc.int_param(0, Some(2))?;
            if !(1..=8).contains(&d) {
                return Err(Error::invalid("zd dimension must be in 1..=8"));
            }
            Arc::new(Zd::new(d))
        }
        "free" => {
            let k = desc.int_param(0, None)?;
            if !(1..=25).contains(&k) {
                return Err(Error::invalid("free rank must be in 1..=25"));
            }
            Arc::new(FreeGroup::new(k))
        }
        "free_product" => Arc::new(builtin_free_product(desc)?),
        "hex" => {
            desc.no_params()?;
            Arc::new(Hex::new())
        }
        "heisenberg" => Arc::new(builtin_heisenberg(desc)?),
        "braid" => Arc::new(BraidModel::new(desc.int_param(0, None)?)?),
        "one_relator_example" | "presentation" => {
            Arc::new(rewriting_model(&builtin_presentation(desc)?, KbBounds::default())?)
        }
        "one_relator_free_basis" => {
            desc.no_params()?;
            Arc::new(one_relator_free_basis())
        }
        other => return Err(Error::invalid(format!("{other} is a graph, not a group"))),
    })
}

/// The neighbor oracle behind a built-in descriptor: a Cayley graph, a
/// ladder graph, or a finite graph file.
pub fn builtin_oracle(desc: &GraphDescriptor) -> Result<Box<dyn NeighborOracle>> {
    match desc.name.as_str() {
        "gamma1" => {
            desc.no_params()?;
            Ok(Box::new(Ladder::gamma1()))
        }
        "gamma2" => {
            desc.no_params()?;
            Ok(Box::new(Ladder::gamma2()))
        }
        "finite_graph" => Ok(Box::new(FiniteGraph::load(desc.path()?)?)),
        _ => Ok(Box::new(CayleyGraph::new(builtin_model(desc)?))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_oracle_contract, Limits};

    #[test]
    fn descriptor_parsing() {
        let d = GraphDescriptor::parse("free_product:2, 3").unwrap();
        assert_eq!(d.params, ["2", "3"]);
        assert_eq!(d.to_string(), "free_product:2,3");
        let f = GraphDescriptor::parse("finite_graph:/tmp/a,b.json").unwrap();
        assert_eq!(f.params, ["/tmp/a,b.json"]);
        assert!(matches!(GraphDescriptor::parse("nope:1"), Err(Error::UnknownBuiltin(_))));
        assert!(builtin_oracle(&GraphDescriptor::parse("zd:x").unwrap()).is_err());
        assert!(builtin_oracle(&GraphDescriptor::parse("hex:1").unwrap()).is_err());
    }

    #[test]
    fn every_builtin_honours_the_oracle_contract() {
        for name in [
            "zd:1", "zd:2", "zd:3", "free:2", "free_product:2,3", "hex", "heisenberg:std",
            "heisenberg:extended", "braid:3", "braid:4", "one_relator_free_basis", "gamma1", "gamma2",
        ] {
            let g = builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap();
            check_oracle_contract(&*g, &g.origin(), 3, &Limits::default()).unwrap();
        }
    }

    #[test]
    fn neighbor_counts() {
        let count = |name: &str| {
            let g = builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap();
            g.neighbors(&g.origin()).len()
        };
        assert_eq!(count("zd:2"), 4);
        assert_eq!(count("free_product:2,3"), 3);
        assert_eq!(count("heisenberg:std"), 4);
        assert_eq!(count("heisenberg:extended"), 6);
        assert_eq!(count("hex"), 6);
    }

    #[test]
    fn builtin_presentations_define_the_models() {
        for name in ["zd:3", "free_product:2,3", "hex", "heisenberg:std", "heisenberg:extended"] {
            let d = GraphDescriptor::parse(name).unwrap();
            let p = builtin_presentation(&d).unwrap();
            let m = builtin_model(&d).unwrap();
            for r in p.relators() {
                assert_eq!(m.evaluate(r), m.identity(), "{name}");
            }
        }
        let m = one_relator_free_basis();
        for r in one_relator_presentation().relators() {
            assert_eq!(m.evaluate(r), m.identity());
        }
    }
}
