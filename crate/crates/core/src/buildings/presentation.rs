use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::bipartite::BipartiteGraph;
use crate::error::{Error, Result};

/// A set of k-tuples over an alphabet P together with the basic bijection
/// λ from P to the white vertex labels.
///
/// Tuples are stored individually; [`PolygonalPresentation::from_cyclic_words`]
/// materialises every rotation, so that closure under rotation holds by
/// construction, while [`PolygonalPresentation::from_tuples`] keeps the raw set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct PolygonalPresentation {
    k: usize,
    alphabet: Vec<String>,
    lambda: Vec<String>,
    tuples: BTreeSet<Vec<usize>>,
}

/// File form: cyclic words, one per rotation orbit.
#[derive(Serialize, Deserialize)]
struct RawPresentation {
    k: usize,
    alphabet: Vec<String>,
    lambda: Vec<(String, String)>,
    words: Vec<Vec<String>>,
}

impl TryFrom<RawPresentation> for PolygonalPresentation {
    type Error = Error;

    fn try_from(r: RawPresentation) -> Result<Self> {
        Self::from_cyclic_words(r.k, r.alphabet, &r.lambda, &r.words)
    }
}

impl From<PolygonalPresentation> for RawPresentation {
    fn from(p: PolygonalPresentation) -> Self {
        RawPresentation {
            k: p.k,
            lambda: p.alphabet.iter().cloned().zip(p.lambda.iter().cloned()).collect(),
            words: p.word_labels(),
            alphabet: p.alphabet,
        }
    }
}

/// Lexicographically least rotation.
pub(crate) fn canonical_rotation(w: &[usize]) -> Vec<usize> {
    (0..w.len().max(1))
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl PolygonalPresentation {
    fn build(
        k: usize,
        alphabet: Vec<String>,
        lambda: &[(String, String)],
        words: &[Vec<String>],
        rotate: bool,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::PresentationInvalid("tuple length must be positive".into()));
        }
        let mut index = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::PresentationInvalid(format!("letter {a} listed twice")));
            }
        }
        let mut lam: Vec<Option<String>> = vec![None; alphabet.len()];
        for (x, y) in lambda {
            let &i = index
                .get(x)
                .ok_or_else(|| Error::PresentationInvalid(format!("λ is defined on unknown letter {x}")))?;
            if lam[i].replace(y.clone()).is_some() {
                return Err(Error::PresentationInvalid(format!("λ({x}) defined twice")));
            }
        }
        let lambda = lam
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| Error::PresentationInvalid(format!("λ({}) is undefined", alphabet[i])))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut tuples = BTreeSet::new();
        for w in words {
            if w.len() != k {
                return Err(Error::PresentationInvalid(format!(
                    "word {w:?} has length {}, expected {k}",
                    w.len()
                )));
            }
            let idx = w
                .iter()
                .map(|x| {
                    index
                        .get(x)
                        .copied()
                        .ok_or_else(|| Error::PresentationInvalid(format!("unknown letter {x}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if rotate {
                for r in 0..k {
                    tuples.insert(idx[r..].iter().chain(&idx[..r]).copied().collect());
                }
            } else {
                tuples.insert(idx);
            }
        }
        Ok(Self { k, alphabet, lambda, tuples })
    }

    /// All rotations of the given words are included.
    pub fn from_cyclic_words(
        k: usize,
        alphabet: Vec<String>,
        lambda: &[(String, String)],
        words: &[Vec<String>],
    ) -> Result<Self> {
        Self::build(k, alphabet, lambda, words, true)
    }

    /// Exactly the given tuples, with no rotation closure.
    pub fn from_tuples(
        k: usize,
        alphabet: Vec<String>,
        lambda: &[(String, String)],
        tuples: &[Vec<String>],
    ) -> Result<Self> {
        Self::build(k, alphabet, lambda, tuples, false)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.alphabet[i]
    }

    /// λ(x_i).
    pub fn lambda(&self, i: usize) -> &str {
        &self.lambda[i]
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == letter)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.tuples.iter()
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    /// One canonical representative per rotation orbit, sorted.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.tuples.iter().map(|t| canonical_rotation(t)).collect();
        set.into_iter().collect()
    }

    pub fn word_count(&self) -> usize {
        self.words().len()
    }

    pub fn labels(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&i| self.alphabet[i].clone()).collect()
    }

    pub fn word_labels(&self) -> Vec<Vec<String>> {
        self.words().iter().map(|w| self.labels(w)).collect()
    }

    pub fn is_rotation_closed(&self) -> bool {
        self.tuples
            .iter()
            .all(|t| self.tuples.contains(&t[1..].iter().chain(&t[..1]).copied().collect::<Vec<_>>()))
    }

    /// Tuples sharing their first two letters but not their third.
    pub(crate) fn uniqueness_violations(&self) -> Vec<Vec<usize>> {
        let mut third: BTreeMap<(usize, usize), Vec<&Vec<usize>>> = BTreeMap::new();
        if self.k < 3 {
            return Vec::new();
        }
        for t in &self.tuples {
            third.entry((t[0], t[1])).or_default().push(t);
        }
        third
            .into_values()
            .filter(|ts| ts.iter().map(|t| t[2]).collect::<HashSet<_>>().len() > 1)
            .flatten()
            .cloned()
            .collect()
    }

    pub(crate) fn lambda_is_injective(&self) -> bool {
        self.lambda.iter().collect::<HashSet<_>>().len() == self.lambda.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub passed: bool,
    pub failures: usize,
    /// At most [`MAX_WITNESSES`] offending tuples, pairs or labels.
    pub witnesses: Vec<Vec<String>>,
}

pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, condition: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

fn check(condition: &str, witnesses: Vec<Vec<String>>) -> ConditionCheck {
    ConditionCheck {
        condition: condition.to_string(),
        passed: witnesses.is_empty(),
        failures: witnesses.len(),
        witnesses: witnesses.into_iter().take(MAX_WITNESSES).collect(),
    }
}

/// Checks the basic bijection against the graphs and the three defining
/// conditions: rotation closure, incidence, and uniqueness of the third
/// letter.
pub fn validate_presentation(p: &PolygonalPresentation, graphs: &[BipartiteGraph]) -> ValidationReport {
    let mut graph_issues = Vec::new();
    let mut black_owner: HashMap<&str, usize> = HashMap::new();
    let mut white_owner: HashMap<&str, usize> = HashMap::new();
    for (gi, g) in graphs.iter().enumerate() {
        if !g.is_connected() {
            graph_issues.push(vec![format!("G{}", gi + 1), "disconnected".into()]);
        }
        for b in g.black() {
            if black_owner.insert(b, gi).is_some() {
                graph_issues.push(vec![b.clone(), "black vertex shared between graphs".into()]);
            }
        }
        for w in g.white() {
            if white_owner.insert(w, gi).is_some() {
                graph_issues.push(vec![w.clone(), "white vertex shared between graphs".into()]);
            }
        }
    }

    let mut bijection = Vec::new();
    let mut images: HashMap<&str, &str> = HashMap::new();
    for (i, x) in p.alphabet.iter().enumerate() {
        if !black_owner.contains_key(x.as_str()) {
            bijection.push(vec![x.clone(), "letter is not a black vertex".into()]);
        }
        let y = p.lambda[i].as_str();
        if !white_owner.contains_key(y) {
            bijection.push(vec![x.clone(), y.to_string(), "image is not a white vertex".into()]);
        }
        if let Some(prev) = images.insert(y, x) {
            bijection.push(vec![prev.to_string(), x.clone(), y.to_string(), "λ is not injective".into()]);
        }
    }
    let letters: HashSet<&str> = p.alphabet.iter().map(String::as_str).collect();
    for b in black_owner.keys() {
        if !letters.contains(b) {
            bijection.push(vec![b.to_string(), "black vertex is not a letter".into()]);
        }
    }
    for w in white_owner.keys() {
        if !images.contains_key(w) {
            bijection.push(vec![w.to_string(), "white vertex is not in the image of λ".into()]);
        }
    }
    bijection.sort();

    let rotation: Vec<Vec<String>> = p
        .tuples
        .iter()
        .filter(|t| !p.tuples.contains(&t[1..].iter().chain(&t[..1]).copied().collect::<Vec<_>>()))
        .map(|t| p.labels(t))
        .collect();

    // Incidence: pairs starting a tuple versus edges {x2, λ(x1)}.
    let starts: BTreeSet<(usize, usize)> = if p.k >= 2 {
        p.tuples.iter().map(|t| (t[0], t[1])).collect()
    } else {
        BTreeSet::new()
    };
    let edges: HashSet<(String, String)> = graphs.iter().flat_map(|g| g.edge_labels()).collect();
    let mut incidence = Vec::new();
    for x1 in 0..p.alphabet.len() {
        for x2 in 0..p.alphabet.len() {
            let started = starts.contains(&(x1, x2));
            let incident = edges.contains(&(p.alphabet[x2].clone(), p.lambda[x1].clone()));
            if started != incident {
                let why = if started { "starts a tuple but is not incident" } else { "incident but starts no tuple" };
                incidence.push(vec![p.alphabet[x1].clone(), p.alphabet[x2].clone(), why.into()]);
            }
        }
    }

    let uniqueness: Vec<Vec<String>> = p.uniqueness_violations().iter().map(|t| p.labels(t)).collect();

    ValidationReport {
        checks: vec![
            check("graphs", graph_issues),
            check("basic_bijection", bijection),
            check("rotation_closure", rotation),
            check("incidence", incidence),
            check("uniqueness", uniqueness),
        ],
    }
}

fn family_letters(prefix: &str, q: usize) -> Vec<String> {
    (1..=4 * q).map(|l| format!("{prefix}{l}")).collect()
}

/// The square presentation over 4q letters with one complete bipartite
/// link K_{4q,4q}: for i, j in [0, q) the words
/// (x_{1+4i}, x_{2+4j}, x_{4+4i}, x_{3+4j}), (x_{1+4i}, x_{1+4j}, x_{4+4i}, x_{4+4j}),
/// (x_{1+4i}, x_{3+4j}, x_{4+4i}, x_{2+4j}), (x_{2+4i}, x_{2+4j}, x_{3+4i}, x_{3+4j}),
/// with λ(x_l) = y_l.
pub fn family_presentation(q: usize) -> Result<PolygonalPresentation> {
    if q == 0 {
        return Err(Error::InvalidParameter("family parameter q must be at least 1".into()));
    }
    let x = |l: usize| format!("x{l}");
    let mut words = Vec::with_capacity(4 * q * q);
    for i in 0..q {
        for j in 0..q {
            let (a, b) = (4 * i, 4 * j);
            words.push(vec![x(1 + a), x(2 + b), x(4 + a), x(3 + b)]);
            words.push(vec![x(1 + a), x(1 + b), x(4 + a), x(4 + b)]);
            words.push(vec![x(1 + a), x(3 + b), x(4 + a), x(2 + b)]);
            words.push(vec![x(2 + a), x(2 + b), x(3 + a), x(3 + b)]);
        }
    }
    let alphabet = family_letters("x", q);
    let lambda: Vec<(String, String)> =
        alphabet.iter().cloned().zip(family_letters("y", q)).collect();
    PolygonalPresentation::from_cyclic_words(4, alphabet, &lambda, &words)
}

/// The single link graph K_{4q,4q} of the family presentation.
pub fn family_graphs(q: usize) -> Result<Vec<BipartiteGraph>> {
    if q == 0 {
        return Err(Error::InvalidParameter("family parameter q must be at least 1".into()));
    }
    Ok(vec![BipartiteGraph::complete(family_letters("x", q), family_letters("y", q))?])
}

fn sheet(label: &str, s: usize) -> String {
    format!("{label}^{s}")
}

/// Replaces each square word (x_k, x_l, x_m, x_n) by the four words
/// (x_k¹, x_l², x_m³, x_n⁴), (x_k⁴, x_l¹, x_m², x_n³), (x_k³, x_l⁴, x_m¹, x_n²),
/// (x_k², x_l³, x_m⁴, x_n¹). The letter x on sheet s is labelled `x^s`.
pub fn four_fold_cover(p: &PolygonalPresentation) -> Result<PolygonalPresentation> {
    if p.k != 4 {
        return Err(Error::RequiresSquares(p.k));
    }
    let mut alphabet = Vec::with_capacity(4 * p.alphabet.len());
    let mut lambda = Vec::with_capacity(4 * p.alphabet.len());
    for s in 1..=4 {
        for (x, y) in p.alphabet.iter().zip(&p.lambda) {
            alphabet.push(sheet(x, s));
            lambda.push((sheet(x, s), sheet(y, s)));
        }
    }
    let mut words = Vec::new();
    for w in p.words() {
        for shift in 0..4 {
            // Position j carries sheet ((j − shift) mod 4) + 1.
            words.push(
                (0..4)
                    .map(|j| sheet(&p.alphabet[w[j]], (j + 4 - shift) % 4 + 1))
                    .collect::<Vec<_>>(),
            );
        }
    }
    PolygonalPresentation::from_cyclic_words(4, alphabet, &lambda, &words)
}

/// The link graphs of the four-fold cover: each G yields four copies, the
/// s-th joining white vertices of sheet s to black vertices of sheet s + 1.
pub fn cover_graphs(graphs: &[BipartiteGraph]) -> Result<Vec<BipartiteGraph>> {
    let mut out = Vec::with_capacity(4 * graphs.len());
    for g in graphs {
        for s in 1..=4 {
            let next = s % 4 + 1;
            let black = g.black().iter().map(|b| sheet(b, next)).collect();
            let white = g.white().iter().map(|w| sheet(w, s)).collect();
            out.push(BipartiteGraph::new(black, white, g.edges().to_vec())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn family_q1_words() {
        let p = family_presentation(1).unwrap();
        let expected: BTreeSet<Vec<String>> = [
            ["x1", "x2", "x4", "x3"],
            ["x1", "x1", "x4", "x4"],
            ["x1", "x3", "x4", "x2"],
            ["x2", "x2", "x3", "x3"],
        ]
        .iter()
        .map(|w| s(w))
        .collect();
        assert_eq!(p.word_labels().into_iter().collect::<BTreeSet<_>>(), expected);
        assert_eq!(p.tuple_count(), 16);
        assert!(validate_presentation(&p, &family_graphs(1).unwrap()).passed());
    }

    #[test]
    fn family_sizes() {
        for q in 1..=3 {
            let p = family_presentation(q).unwrap();
            assert_eq!(p.word_count(), 4 * q * q);
            assert_eq!(p.alphabet().len(), 4 * q);
            assert_eq!(four_fold_cover(&p).unwrap().word_count(), 16 * q * q);
        }
        assert!(family_presentation(0).is_err());
    }

    #[test]
    fn removed_rotation_is_reported() {
        let p = family_presentation(1).unwrap();
        let mut tuples: Vec<Vec<String>> = p.tuples().map(|t| p.labels(t)).collect();
        tuples.retain(|t| t != &s(&["x2", "x4", "x3", "x1"]));
        let lambda: Vec<(String, String)> =
            (1..=4).map(|l| (format!("x{l}"), format!("y{l}"))).collect();
        let broken = PolygonalPresentation::from_tuples(4, p.alphabet().to_vec(), &lambda, &tuples).unwrap();
        let r = validate_presentation(&broken, &family_graphs(1).unwrap());
        let c = r.check("rotation_closure").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witnesses, vec![s(&["x1", "x2", "x4", "x3"])]);
        // The missing tuple also leaves the pair (x2, x4) without a continuation.
        assert!(!r.check("incidence").unwrap().passed);
        assert!(r.check("uniqueness").unwrap().passed);
    }

    #[test]
    fn duplicated_continuation_is_reported() {
        let p = family_presentation(1).unwrap();
        let mut words = p.word_labels();
        words.push(s(&["x1", "x2", "x1", "x3"]));
        let lambda: Vec<(String, String)> =
            (1..=4).map(|l| (format!("x{l}"), format!("y{l}"))).collect();
        let dup = PolygonalPresentation::from_cyclic_words(4, p.alphabet().to_vec(), &lambda, &words).unwrap();
        let r = validate_presentation(&dup, &family_graphs(1).unwrap());
        let c = r.check("uniqueness").unwrap();
        assert!(!c.passed);
        assert!(c.witnesses.contains(&s(&["x1", "x2", "x1", "x3"])));
        assert!(c.witnesses.contains(&s(&["x1", "x2", "x4", "x3"])));
    }

    #[test]
    fn bijection_failures() {
        let p = family_presentation(1).unwrap();
        let wrong = vec![BipartiteGraph::complete(s(&["x1", "x2", "x3"]), s(&["y1", "y2", "y3"])).unwrap()];
        let r = validate_presentation(&p, &wrong);
        assert!(!r.check("basic_bijection").unwrap().passed);
        let lambda: Vec<(String, String)> =
            vec![("a".into(), "y".into()), ("b".into(), "y".into())];
        let q = PolygonalPresentation::from_cyclic_words(2, s(&["a", "b"]), &lambda, &[s(&["a", "b"])]).unwrap();
        let g = BipartiteGraph::complete(s(&["a", "b"]), s(&["y"])).unwrap();
        assert!(!validate_presentation(&q, &[g]).check("basic_bijection").unwrap().passed);
    }

    #[test]
    fn cover_validates_against_cover_graphs() {
        for q in 1..=2 {
            let c = four_fold_cover(&family_presentation(q).unwrap()).unwrap();
            let g = cover_graphs(&family_graphs(q).unwrap()).unwrap();
            let r = validate_presentation(&c, &g);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn construction_errors() {
        let lambda = vec![("a".to_string(), "y".to_string())];
        assert!(PolygonalPresentation::from_cyclic_words(2, s(&["a"]), &lambda, &[s(&["a"])]).is_err());
        assert!(PolygonalPresentation::from_cyclic_words(1, s(&["a"]), &lambda, &[s(&["b"])]).is_err());
        assert!(PolygonalPresentation::from_cyclic_words(1, s(&["a", "b"]), &lambda, &[]).is_err());
        let sq = PolygonalPresentation::from_cyclic_words(3, s(&["a"]), &lambda, &[s(&["a", "a", "a"])]).unwrap();
        assert!(matches!(four_fold_cover(&sq), Err(Error::RequiresSquares(3))));
    }

    #[test]
    fn serde_round_trip() {
        let p = family_presentation(2).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: PolygonalPresentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
