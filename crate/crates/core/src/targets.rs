//! Target spaces presented by their function rings: polynomial rings,
//! quotients by relation ideals, and finitely presented free algebras.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::linalg::{ExactMatrix, Insertion, SpanBuilder};
use crate::poly::{
    parse_free, parse_multi, xi_generators, xi_products, xi_relations, Algebra, FreePoly, Monomial, MultiPoly,
    TruncatedIdeal,
};
use crate::scalar::GaussianRational;

/// Word-length cap used for free-algebra targets that do not declare one.
pub const DEFAULT_FREE_CAP: usize = 4;

/// A polynomial in a target's generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Commutative(MultiPoly),
    Free(FreePoly),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Commutative(p) => p.is_zero(),
            Element::Free(p) => p.is_zero(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            Element::Commutative(p) => p.total_degree().map(|d| d as usize),
            Element::Free(p) => p.degree(),
        }
    }

    /// Substitutes matrices for the generators, multiplying letters in order.
    pub fn evaluate_matrices(&self, ms: &[ExactMatrix]) -> Result<ExactMatrix> {
        let n = ms.first().ok_or(Error::EmptyTuple)?.rows();
        self.evaluate_with(ms, &ExactMatrix::identity(n))
    }

    /// Substitutes elements of any algebra for the generators.
    pub fn evaluate_with<A: Algebra>(&self, values: &[A], one: &A) -> Result<A> {
        match self {
            Element::Commutative(p) => p.evaluate(values, one),
            Element::Free(p) => p.evaluate(values, one),
        }
    }

    /// Substitutes `values` (elements over some other ring) for the generators.
    fn evaluate_in(&self, values: &[Element], one: &Element) -> Result<Element> {
        match (self, one) {
            (Element::Commutative(p), Element::Commutative(o)) => {
                Ok(Element::Commutative(p.evaluate(&commutative_values(values)?, o)?))
            }
            (Element::Commutative(p), Element::Free(o)) => Ok(Element::Free(p.evaluate(&free_values(values)?, o)?)),
            (Element::Free(p), Element::Commutative(o)) => {
                Ok(Element::Commutative(p.evaluate(&commutative_values(values)?, o)?))
            }
            (Element::Free(p), Element::Free(o)) => Ok(Element::Free(p.evaluate(&free_values(values)?, o)?)),
        }
    }
}

fn commutative_values(values: &[Element]) -> Result<Vec<MultiPoly>> {
    values
        .iter()
        .map(|v| match v {
            Element::Commutative(p) => Ok(p.clone()),
            Element::Free(_) => Err(Error::Shape("expected commutative images".into())),
        })
        .collect()
}

fn free_values(values: &[Element]) -> Result<Vec<FreePoly>> {
    values
        .iter()
        .map(|v| match v {
            Element::Free(p) => Ok(p.clone()),
            Element::Commutative(_) => Err(Error::Shape("expected free-algebra images".into())),
        })
        .collect()
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Commutative(p) => write!(f, "{p}"),
            Element::Free(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TargetJson", into = "TargetJson")]
pub struct TargetPresentation {
    name: String,
    generators: Vec<String>,
    commutative: bool,
    cap: usize,
    relations: Vec<Element>,
}

#[derive(Serialize, Deserialize)]
struct TargetJson {
    name: String,
    generators: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
    commutative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree_cap: Option<usize>,
}

impl From<TargetPresentation> for TargetJson {
    fn from(t: TargetPresentation) -> Self {
        Self {
            relations: t.relations.iter().map(ToString::to_string).collect(),
            degree_cap: (!t.commutative).then_some(t.cap),
            name: t.name,
            generators: t.generators,
            commutative: t.commutative,
        }
    }
}

impl TryFrom<TargetJson> for TargetPresentation {
    type Error = Error;

    fn try_from(j: TargetJson) -> Result<Self> {
        if j.commutative {
            let relations = j.relations.iter().map(|r| parse_multi(r, &j.generators)).collect::<Result<Vec<_>>>()?;
            TargetPresentation::commutative(&j.name, &j.generators, relations)
        } else {
            let parse_cap = j.degree_cap.unwrap_or(usize::MAX);
            let relations =
                j.relations.iter().map(|r| parse_free(r, &j.generators, parse_cap)).collect::<Result<Vec<_>>>()?;
            let cap = j.degree_cap.unwrap_or_else(|| {
                relations.iter().filter_map(FreePoly::degree).max().unwrap_or(0).max(DEFAULT_FREE_CAP)
            });
            TargetPresentation::free(&j.name, &j.generators, relations, cap)
        }
    }
}

fn check_generators(generators: &[String]) -> Result<()> {
    if generators.is_empty() {
        return Err(ParseError::Schema("a target needs at least one generator".into()).into());
    }
    for (k, g) in generators.iter().enumerate() {
        let valid = g.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && g.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(ParseError::Schema(format!("invalid generator name `{g}`")).into());
        }
        if generators[..k].contains(g) {
            return Err(ParseError::Schema(format!("generator `{g}` declared twice")).into());
        }
    }
    Ok(())
}

impl TargetPresentation {
    pub fn commutative(name: &str, generators: &[String], relations: Vec<MultiPoly>) -> Result<Self> {
        check_generators(generators)?;
        let relations = relations
            .into_iter()
            .map(|r| r.rename_into(generators).map(Element::Commutative))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.to_string(), generators: generators.to_vec(), commutative: true, cap: 0, relations })
    }

    pub fn free(name: &str, generators: &[String], relations: Vec<FreePoly>, cap: usize) -> Result<Self> {
        check_generators(generators)?;
        let relations = relations
            .into_iter()
            .map(|r| {
                if r.generators() != generators {
                    return Err(Error::Shape(format!("relation `{r}` is over different generators")));
                }
                r.with_cap(cap).map(Element::Free)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.to_string(), generators: generators.to_vec(), commutative: false, cap, relations })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Word-length cap of a free-algebra target (zero for commutative ones).
    pub fn degree_cap(&self) -> usize {
        self.cap
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    /// The relations of a commutative target.
    pub fn commutative_relations(&self) -> Vec<MultiPoly> {
        self.relations
            .iter()
            .filter_map(|r| match r {
                Element::Commutative(p) => Some(p.clone()),
                Element::Free(_) => None,
            })
            .collect()
    }

    /// The unit element of the target's ring.
    pub fn one(&self) -> Element {
        if self.commutative {
            Element::Commutative(MultiPoly::constant(&self.generators, GaussianRational::one()))
        } else {
            Element::Free(FreePoly::constant(&self.generators, self.cap, GaussianRational::one()))
        }
    }

    /// Parses an element of the target's ring.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        if self.commutative {
            parse_multi(text, &self.generators).map(Element::Commutative)
        } else {
            parse_free(text, &self.generators, self.cap).map(Element::Free)
        }
    }

    fn owns(&self, e: &Element) -> bool {
        match e {
            Element::Commutative(p) => self.commutative && p.variables() == self.generators.as_slice(),
            Element::Free(p) => !self.commutative && p.generators() == self.generators.as_slice(),
        }
    }
}

impl fmt::Display for TargetPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.commutative { "[" } else { "<" };
        let close = if self.commutative { "]" } else { ">" };
        write!(f, "{}: Q(i){open}{}{close}", self.name, self.generators.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(ToString::to_string).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// A target given either by a built-in key or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Key(String),
    Inline(TargetPresentation),
}

impl<'de> Deserialize<'de> for TargetSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Key(String),
            Inline(TargetJson),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Key(k) => Ok(TargetSpec::Key(k)),
            Raw::Inline(j) => TargetPresentation::try_from(j).map(TargetSpec::Inline).map_err(serde::de::Error::custom),
        }
    }
}

impl TargetSpec {
    pub fn resolve(&self) -> Result<TargetPresentation> {
        match self {
            TargetSpec::Key(k) => builtin_target(k),
            TargetSpec::Inline(t) => Ok(t.clone()),
        }
    }

    /// The built-in key when `t` is exactly a built-in target, else inline.
    pub fn describe(t: &TargetPresentation) -> Self {
        match builtin_target(t.name()) {
            Ok(b) if &b == t => TargetSpec::Key(t.name().to_string()),
            _ => TargetSpec::Inline(t.clone()),
        }
    }
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

/// Keys accepted by [`builtin_target`].
pub const BUILTIN_KEYS: &[&str] = &["affine_line", "affine_space(l)", "conifold", "r_xi", "nodal_cubic"];

/// Built-in targets: `affine_line`, `affine_space(l)`, `conifold`, `r_xi`,
/// `nodal_cubic`.
pub fn builtin_target(key: &str) -> Result<TargetPresentation> {
    let unknown = || Error::UnknownTarget(key.to_string());
    match key.trim() {
        "affine_line" => TargetPresentation::commutative("affine_line", &["y".to_string()], Vec::new()),
        "conifold" => {
            let g = names("z", 4);
            let rel = parse_multi("z1*z2 - z3*z4", &g)?;
            TargetPresentation::commutative("conifold", &g, vec![rel])
        }
        "r_xi" => TargetPresentation::free("r_xi", &xi_generators(), xi_relations(), 4),
        "nodal_cubic" => {
            let g = vec!["x".to_string(), "y".to_string()];
            let rel = parse_multi("y^2 - x^2*(x + 1)", &g)?;
            TargetPresentation::commutative("nodal_cubic", &g, vec![rel])
        }
        other => {
            let inner = other.strip_prefix("affine_space(").and_then(|s| s.strip_suffix(')')).ok_or_else(unknown)?;
            let l: usize = inner.trim().parse().map_err(|_| unknown())?;
            if l == 0 {
                return Err(unknown());
            }
            TargetPresentation::commutative(&format!("affine_space({l})"), &names("y", l), Vec::new())
        }
    }
}

/// Polynomial ring `Q(i)[z1, …, z4]` with no relations.
pub fn free_z_space() -> TargetPresentation {
    TargetPresentation::commutative("affine_space(z1..z4)", &names("z", 4), Vec::new()).expect("valid names")
}

/// Ring homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMap {
    source: TargetPresentation,
    destination: TargetPresentation,
    images: Vec<Element>,
}

impl AlgebraMap {
    pub fn new(source: TargetPresentation, destination: TargetPresentation, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Shape(format!(
                "{} images for {} source generators",
                images.len(),
                source.generators().len()
            )));
        }
        if let Some(bad) = images.iter().find(|e| !destination.owns(e)) {
            return Err(Error::Shape(format!("image `{bad}` is not an element of {}", destination.name())));
        }
        Ok(Self { source, destination, images })
    }

    pub fn source(&self) -> &TargetPresentation {
        &self.source
    }

    pub fn destination(&self) -> &TargetPresentation {
        &self.destination
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Image of a source element.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        e.evaluate_in(&self.images, &self.destination.one())
    }
}

/// `z_k ↦ ξ₁ξ₃, ξ₂ξ₄, ξ₁ξ₄, ξ₂ξ₃` from a four-generator commutative source into
/// the conifold algebra.
pub fn pi_xi(source: TargetPresentation) -> Result<AlgebraMap> {
    let dest = builtin_target("r_xi")?;
    AlgebraMap::new(source, dest, xi_products().into_iter().map(Element::Free).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// Not in the degree-bounded span, but the bound is not known to be
    /// conclusive for these relations.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub image: String,
    pub normal_form: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapReport {
    pub source: String,
    pub destination: String,
    pub checks: Vec<RelationCheck>,
    pub well_defined: Verdict,
}

/// Checks that every source relation (and, for a commutative source mapped
/// into a free algebra, every commutator of generators) is sent to zero.
pub fn validate_algebra_map(map: &AlgebraMap) -> Result<MapReport> {
    let src = map.source();
    let mut relations: Vec<(String, Element)> = src.relations().iter().map(|r| (r.to_string(), r.clone())).collect();
    if src.is_commutative() && !map.destination().is_commutative() {
        let cap = map.destination().degree_cap().max(2);
        let gens = src.generators();
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let x = FreePoly::var(gens, cap, a);
                let y = FreePoly::var(gens, cap, b);
                relations.push((format!("[{}, {}]", gens[a], gens[b]), Element::Free(FreePoly::commutator(&x, &y)?)));
            }
        }
    }
    let dest = map.destination();
    let free_ideal = if dest.is_commutative() {
        None
    } else {
        Some(TruncatedIdeal::new(dest.generators(), &free_relations(dest), dest.degree_cap())?)
    };
    let mut checks = Vec::new();
    for (text, rel) in relations {
        let image = map.apply(&rel)?;
        let (normal_form, verdict) = reduce_in(dest, free_ideal.as_ref(), &image)?;
        checks.push(RelationCheck { relation: text, image: image.to_string(), normal_form, verdict });
    }
    let well_defined = if checks.iter().any(|c| c.verdict == Verdict::Fails) {
        Verdict::Fails
    } else if checks.iter().any(|c| c.verdict == Verdict::Undetermined) {
        Verdict::Undetermined
    } else {
        Verdict::Holds
    };
    Ok(MapReport {
        source: src.name().to_string(),
        destination: map.destination().name().to_string(),
        checks,
        well_defined,
    })
}

fn free_relations(dest: &TargetPresentation) -> Vec<FreePoly> {
    dest.relations()
        .iter()
        .filter_map(|r| match r {
            Element::Free(q) => Some(q.clone()),
            Element::Commutative(_) => None,
        })
        .collect()
}

fn reduce_in(dest: &TargetPresentation, free_ideal: Option<&TruncatedIdeal>, e: &Element) -> Result<(String, Verdict)> {
    match e {
        Element::Free(p) => {
            let ideal = free_ideal.ok_or_else(|| Error::Internal("free element in a commutative target".into()))?;
            let nf = ideal.normal_form(p)?;
            let conclusive = free_relations(dest).iter().all(free_homogeneous);
            let verdict = match (nf.is_zero(), conclusive) {
                (true, _) => Verdict::Holds,
                (false, true) => Verdict::Fails,
                (false, false) => Verdict::Undetermined,
            };
            Ok((nf.to_string(), verdict))
        }
        Element::Commutative(p) => {
            let rels = dest.commutative_relations();
            let remainder = p.remainder(&rels);
            let verdict = if bounded_membership(p, &rels) {
                Verdict::Holds
            } else if rels.len() <= 1 || rels.iter().all(MultiPoly::is_homogeneous) {
                Verdict::Fails
            } else {
                Verdict::Undetermined
            };
            let nf = if verdict == Verdict::Holds { "0".to_string() } else { remainder.to_string() };
            Ok((nf, verdict))
        }
    }
}

fn free_homogeneous(p: &FreePoly) -> bool {
    let mut lens = p.terms().map(|(w, _)| w.len());
    match lens.next() {
        Some(d) => lens.all(|e| e == d),
        None => true,
    }
}

/// Whether `p` lies in the span of `m·g` over relations `g` and monomials `m`
/// with `deg(m·g) ≤ deg(p)`. Conclusive for a single relation and for
/// homogeneous relations.
pub fn bounded_membership(p: &MultiPoly, relations: &[MultiPoly]) -> bool {
    let Some(d) = p.total_degree() else { return true };
    let n = p.nvars();
    let monomials: Vec<Monomial> = (0..=d).flat_map(|k| Monomial::of_degree(n, k)).collect();
    let position = |m: &Monomial| monomials.iter().position(|x| x == m);
    let vectorize = |q: &MultiPoly| -> Vec<GaussianRational> {
        let mut v = vec![num_traits::Zero::zero(); monomials.len()];
        for (m, c) in q.terms() {
            v[position(m).expect("within degree bound")] = c.clone();
        }
        v
    };
    let mut span = SpanBuilder::new(monomials.len());
    for g in relations {
        let Some(dg) = g.total_degree() else { continue };
        if dg > d {
            continue;
        }
        for k in 0..=d - dg {
            for m in Monomial::of_degree(n, k) {
                span.insert(&vectorize(&g.mul_monomial(&m)));
            }
        }
    }
    matches!(span.insert(&vectorize(p)), Insertion::Dependent(_))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let line = builtin_target("affine_line").unwrap();
        assert_eq!(line.generators(), &["y".to_string()]);
        assert!(line.relations().is_empty() && line.is_commutative());
        let c = builtin_target("conifold").unwrap();
        assert_eq!(c.relations()[0].to_string(), "z1*z2 - z3*z4");
        let r = builtin_target("r_xi").unwrap();
        assert_eq!(r.relations().len(), 6);
        assert!(!r.is_commutative());
        assert_eq!(builtin_target("affine_space(3)").unwrap().generators().len(), 3);
        let nodal = builtin_target("nodal_cubic").unwrap();
        assert_eq!(nodal.relations()[0].to_string(), "-x^3 - x^2 + y^2");
        for bad in ["affine_space(0)", "projective_line", "affine_space(x)"] {
            assert!(matches!(builtin_target(bad), Err(Error::UnknownTarget(_))));
        }
    }

    #[test]
    fn json_round_trip() {
        for key in ["affine_line", "conifold", "r_xi", "nodal_cubic", "affine_space(2)"] {
            let t = builtin_target(key).unwrap();
            let text = serde_json::to_string(&t).unwrap();
            let back: TargetPresentation = serde_json::from_str(&text).unwrap();
            assert_eq!(back, t, "{key}");
        }
        let bad = r#"{"name":"q","generators":["a","a"],"relations":[],"commutative":true}"#;
        assert!(serde_json::from_str::<TargetPresentation>(bad).is_err());
    }

    #[test]
    fn pi_xi_from_free_source_is_well_defined() {
        let report = validate_algebra_map(&pi_xi(free_z_space()).unwrap()).unwrap();
        assert_eq!(report.well_defined, Verdict::Holds);
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn identity_on_conifold() {
        let c = builtin_target("conifold").unwrap();
        let images = (0..4).map(|i| Element::Commutative(MultiPoly::var(c.generators(), i))).collect();
        let map = AlgebraMap::new(c.clone(), c, images).unwrap();
        let report = validate_algebra_map(&map).unwrap();
        assert_eq!(report.well_defined, Verdict::Holds);
        assert_eq!(report.checks[0].normal_form, "0");
    }

    #[test]
    fn conifold_into_r_xi_is_not_well_defined() {
        let report = validate_algebra_map(&pi_xi(builtin_target("conifold").unwrap()).unwrap()).unwrap();
        assert_eq!(report.well_defined, Verdict::Fails);
        let conifold_check = &report.checks[0];
        assert_eq!(conifold_check.relation, "z1*z2 - z3*z4");
        assert_eq!(conifold_check.verdict, Verdict::Fails);
        assert!(report.checks[1..].iter().all(|c| c.verdict == Verdict::Holds));
    }

    #[test]
    fn commutative_membership() {
        let n = builtin_target("nodal_cubic").unwrap();
        let rel = n.commutative_relations()[0].clone();
        let x = MultiPoly::var(n.generators(), 0);
        assert!(bounded_membership(&rel.mul(&x), std::slice::from_ref(&rel)));
        assert!(!bounded_membership(&x, std::slice::from_ref(&rel)));
        // Parametrization t ↦ (t² − 1, t³ − t) of the nodal cubic.
        let t_vars = vec!["t".to_string()];
        let line = TargetPresentation::commutative("affine_line_t", &t_vars, Vec::new()).unwrap();
        let images = vec![line.parse_element("t^2 - 1").unwrap(), line.parse_element("t^3 - t").unwrap()];
        let map = AlgebraMap::new(n, line, images).unwrap();
        assert_eq!(validate_algebra_map(&map).unwrap().well_defined, Verdict::Holds);
    }
}
