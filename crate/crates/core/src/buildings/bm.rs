use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::bipartite::BipartiteGraph;
use super::presentation::PolygonalPresentation;
use crate::error::{Error, Result};
use crate::ktheory::{AbelianGroupDescriptor, IntegerMatrix};

/// Position classes of letters: every square word must read
/// (x¹, y¹, x², y²) with the letter classes 0, 1, 2, 3 up to rotation.
/// Classes are solved by a union–find with Z/4 offsets; `Err` carries the
/// first word that admits no consistent assignment.
fn infer_classes(p: &PolygonalPresentation) -> std::result::Result<Vec<Option<u8>>, Vec<usize>> {
    let n = p.alphabet().len();
    let mut parent: Vec<usize> = (0..n).collect();
    // offset[x] = class(x) − class(parent[x]) mod 4
    let mut offset = vec![0u8; n];
    fn find(parent: &mut [usize], offset: &mut [u8], x: usize) -> (usize, u8) {
        if parent[x] == x {
            return (x, 0);
        }
        let (r, o) = find(parent, offset, parent[x]);
        offset[x] = (offset[x] + o) % 4;
        parent[x] = r;
        (r, offset[x])
    }
    let mut used = vec![false; n];
    for w in p.words() {
        for (j, &x) in w.iter().enumerate() {
            used[x] = true;
            let (ra, oa) = find(&mut parent, &mut offset, w[0]);
            let (rb, ob) = find(&mut parent, &mut offset, x);
            let want = j as u8 % 4;
            if ra == rb {
                if (ob + 4 - oa) % 4 != want {
                    return Err(w);
                }
            } else {
                // class(rb) = class(x) − ob = class(w0) + want − ob
                parent[rb] = ra;
                offset[rb] = (oa + want + 8 - ob) % 4;
            }
        }
    }
    // Normalise so the first letter of each component has class 0.
    let mut base: BTreeMap<usize, u8> = BTreeMap::new();
    let mut classes = vec![None; n];
    for x in 0..n {
        if !used[x] {
            continue;
        }
        let (r, o) = find(&mut parent, &mut offset, x);
        let b = *base.entry(r).or_insert(o);
        classes[x] = Some((o + 4 - b) % 4);
    }
    Ok(classes)
}

/// Rotation of a word starting at its class-0 letter.
fn rotate_to_class_zero(w: &[usize], classes: &[Option<u8>]) -> [usize; 4] {
    let j = w.iter().position(|&x| classes[x] == Some(0)).expect("one letter of class 0");
    [w[j], w[(j + 1) % 4], w[(j + 2) % 4], w[(j + 3) % 4]]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StablePairsReport {
    pub holds: bool,
    /// Offending words, as letter labels.
    pub witnesses: Vec<Vec<String>>,
}

struct Pairing {
    /// Words as (x¹, y¹, x², y²).
    words: Vec<[usize; 4]>,
    horizontal: BTreeMap<usize, usize>,
    vertical: BTreeMap<usize, usize>,
    classes: Vec<Option<u8>>,
}

/// For each letter, the partner opposite to it must be the same in every
/// word. Returns the pairing or the offending word indices.
fn pairing(p: &PolygonalPresentation) -> Result<std::result::Result<Pairing, Vec<Vec<usize>>>> {
    if p.k() != 4 {
        return Err(Error::RequiresSquares(p.k()));
    }
    let classes = match infer_classes(p) {
        Ok(c) => c,
        Err(w) => return Ok(Err(vec![w])),
    };
    let words: Vec<[usize; 4]> = p.words().iter().map(|w| rotate_to_class_zero(w, &classes)).collect();
    // partners[letter][partner] = word indices
    let mut partners: BTreeMap<usize, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
    for (wi, w) in words.iter().enumerate() {
        for (a, b) in [(w[0], w[2]), (w[2], w[0]), (w[1], w[3]), (w[3], w[1])] {
            partners.entry(a).or_default().entry(b).or_default().push(wi);
        }
    }
    let mut bad = BTreeSet::new();
    for by_partner in partners.values() {
        if by_partner.len() > 1 {
            let majority = by_partner
                .iter()
                .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
                .map(|(&k, _)| k)
                .expect("nonempty");
            for (k, ws) in by_partner {
                if *k != majority {
                    bad.extend(ws.iter().copied());
                }
            }
        }
    }
    if !bad.is_empty() {
        return Ok(Err(bad.into_iter().map(|i| words[i].to_vec()).collect()));
    }
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for w in &words {
        horizontal.insert(w[0], w[2]);
        vertical.insert(w[1], w[3]);
    }
    Ok(Ok(Pairing { words, horizontal, vertical, classes }))
}

/// Every word containing x¹_m or x²_m reads (x¹_m, y¹_s, x²_m, y²_t), and
/// dually for the vertical letters. The four letter families are inferred
/// from positions in the words.
pub fn stable_pairs_check(p: &PolygonalPresentation) -> Result<StablePairsReport> {
    Ok(match pairing(p)? {
        Ok(_) => StablePairsReport { holds: true, witnesses: Vec::new() },
        Err(ws) => StablePairsReport { holds: false, witnesses: ws.iter().map(|w| p.labels(w)).collect() },
    })
}

/// A finitely presented group whose generators are split into horizontal
/// and vertical ones. Relators are cyclic words of (generator, ±1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub horizontal: Vec<bool>,
    pub relators: Vec<Vec<(usize, i8)>>,
}

impl GroupPresentation {
    /// Abelianisation Z^gens / (exponent-sum rows of the relators).
    pub fn abelianization(&self) -> AbelianGroupDescriptor {
        let g = self.generators.len();
        let mut m = IntegerMatrix::zeros(g, self.relators.len());
        for (j, r) in self.relators.iter().enumerate() {
            for &(x, e) in r {
                m[(x, j)] += e as i64;
            }
        }
        AbelianGroupDescriptor::cokernel(&m)
    }

    /// Every relator has length 4 and alternates horizontal and vertical.
    pub fn is_square_shaped(&self) -> bool {
        self.relators.iter().all(|r| {
            r.len() == 4 && (0..4).all(|j| self.horizontal[r[j].0] != self.horizontal[r[(j + 1) % 4].0])
        })
    }

    fn signed(&self, (x, e): (usize, i8)) -> String {
        if e > 0 {
            self.generators[x].clone()
        } else {
            format!("{}^-1", self.generators[x])
        }
    }

    /// Link of the single vertex of the presentation complex: vertices are
    /// signed generators, and the corner between consecutive letters u, v
    /// of a relator joins u⁻¹ and v. Horizontal letters are black.
    pub fn vertex_link(&self) -> Result<BipartiteGraph> {
        let mut black = Vec::new();
        let mut white = Vec::new();
        for (x, &h) in self.horizontal.iter().enumerate() {
            let list = if h { &mut black } else { &mut white };
            list.push(self.signed((x, 1)));
            list.push(self.signed((x, -1)));
        }
        let mut edges = Vec::new();
        for r in &self.relators {
            for j in 0..r.len() {
                let (u, v) = (r[j], r[(j + 1) % r.len()]);
                let u_inv = (u.0, -u.1);
                let (hb, vb) = match (self.horizontal[u.0], self.horizontal[v.0]) {
                    (true, false) => (u_inv, v),
                    (false, true) => (v, u_inv),
                    _ => {
                        return Err(Error::NotBMReducible(format!(
                            "corner between {} and {} joins letters of the same direction",
                            self.signed(u),
                            self.signed(v)
                        )))
                    }
                };
                edges.push((self.signed(hb), self.signed(vb)));
            }
        }
        BipartiteGraph::from_labels(black, white, &edges)
    }

    pub fn render_relator(&self, r: &[(usize, i8)]) -> String {
        r.iter().map(|&l| self.signed(l)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BMGroupData {
    pub horizontal: Vec<String>,
    pub vertical: Vec<String>,
    /// Relations a b a'⁻¹ b'⁻¹ as (generator, exponent) quadruples.
    pub relations: Vec<Vec<(String, i8)>>,
    pub valences: (usize, usize),
    /// The word whose letters were made trivial.
    pub collapsed: Vec<String>,
}

impl BMGroupData {
    pub fn presentation(&self) -> GroupPresentation {
        let generators: Vec<String> = self.horizontal.iter().chain(&self.vertical).cloned().collect();
        let horizontal = (0..generators.len()).map(|i| i < self.horizontal.len()).collect();
        let index = |g: &String| generators.iter().position(|x| x == g).expect("known generator");
        let relators = self
            .relations
            .iter()
            .map(|r| r.iter().map(|(g, e)| (index(g), *e)).collect())
            .collect();
        GroupPresentation { generators, horizontal, relators }
    }
}

/// Fundamental-group data of a square complex with the stable pairs
/// property. The letters of the lexicographically first word are made
/// trivial; each x² letter becomes the inverse of its paired x¹ letter and
/// each y² letter the inverse of its paired y¹ letter. The remaining words
/// give relations (a, b, a⁻¹, b'⁻¹).
pub fn bm_group_data(p: &PolygonalPresentation) -> Result<BMGroupData> {
    let pr = match pairing(p)? {
        Ok(pr) => pr,
        Err(ws) => {
            return Err(Error::NotBMReducible(format!(
                "stable pairs condition fails at {:?}",
                p.labels(&ws[0])
            )))
        }
    };
    let components: BTreeSet<_> = pr.classes.iter().flatten().collect();
    if components.len() != 4 {
        return Err(Error::NotBMReducible("words do not use all four letter families".into()));
    }
    let first = *pr.words.iter().min().ok_or_else(|| Error::NotBMReducible("no words".into()))?;
    let (m, l) = (first[0], first[1]);
    let xs: Vec<usize> = pr.horizontal.keys().copied().filter(|&x| x != m).collect();
    let ys: Vec<usize> = pr.vertical.keys().copied().filter(|&y| y != l).collect();
    let inverse_h: BTreeMap<usize, usize> = pr.horizontal.iter().map(|(&a, &b)| (b, a)).collect();
    let inverse_v: BTreeMap<usize, usize> = pr.vertical.iter().map(|(&a, &b)| (b, a)).collect();
    // Letter → (generator letter, exponent), or None when trivial.
    let image = |x: usize, class: usize| -> Option<(usize, i8)> {
        let (g, e) = match class {
            0 => (x, 1),
            1 => (x, 1),
            2 => (inverse_h[&x], -1),
            _ => (inverse_v[&x], -1),
        };
        if g == m || g == l {
            None
        } else {
            Some((g, e))
        }
    };
    let mut relations = Vec::new();
    for w in &pr.words {
        let mut r: Vec<(usize, i8)> = (0..4).filter_map(|c| image(w[c], c)).collect();
        // Free and cyclic reduction.
        loop {
            let before = r.len();
            let mut out: Vec<(usize, i8)> = Vec::new();
            for x in r {
                match out.last() {
                    Some(&(g, e)) if g == x.0 && e == -x.1 => {
                        out.pop();
                    }
                    _ => out.push(x),
                }
            }
            while out.len() >= 2 && out[0].0 == out[out.len() - 1].0 && out[0].1 == -out[out.len() - 1].1 {
                out.remove(0);
                out.pop();
            }
            r = out;
            if r.len() == before {
                break;
            }
        }
        match r.len() {
            0 => continue,
            4 => relations.push(r.iter().map(|&(g, e)| (p.letter(g).to_string(), e)).collect()),
            _ => {
                return Err(Error::NotBMReducible(format!(
                    "word {:?} reduces to a relation of length {}",
                    p.labels(w),
                    r.len()
                )))
            }
        }
    }
    let data = BMGroupData {
        horizontal: xs.iter().map(|&x| p.letter(x).to_string()).collect(),
        vertical: ys.iter().map(|&y| p.letter(y).to_string()).collect(),
        relations,
        valences: (2 * xs.len(), 2 * ys.len()),
        collapsed: p.labels(&first),
    };
    if !data.presentation().is_square_shaped() {
        return Err(Error::NotBMReducible("a relation does not alternate directions".into()));
    }
    Ok(data)
}

fn fixture(relators: [[(usize, i8); 4]; 4]) -> GroupPresentation {
    GroupPresentation {
        generators: ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect(),
        horizontal: vec![true, false, true, false],
        relators: relators.iter().map(|r| r.to_vec()).collect(),
    }
}

const A1: usize = 0;
const B1: usize = 1;
const A2: usize = 2;
const B2: usize = 3;

/// ⟨a1, b1, a2, b2 | a1b1a1⁻¹b1⁻¹, a1b2a1⁻¹b2⁻¹, a2b1a2⁻¹b2, a2b2a2⁻¹b1⟩,
/// acting on a product of two 4-valent trees.
pub fn p1_fixture() -> GroupPresentation {
    fixture([
        [(A1, 1), (B1, 1), (A1, -1), (B1, -1)],
        [(A1, 1), (B2, 1), (A1, -1), (B2, -1)],
        [(A2, 1), (B1, 1), (A2, -1), (B2, 1)],
        [(A2, 1), (B2, 1), (A2, -1), (B1, 1)],
    ])
}

/// ⟨a1, b1, a2, b2 | a1b1a1⁻¹b2, a1b2a1⁻¹b1, a2b1a2⁻¹b2, a2b2a2⁻¹b1⟩.
pub fn p2_fixture() -> GroupPresentation {
    fixture([
        [(A1, 1), (B1, 1), (A1, -1), (B2, 1)],
        [(A1, 1), (B2, 1), (A1, -1), (B1, 1)],
        [(A2, 1), (B1, 1), (A2, -1), (B2, 1)],
        [(A2, 1), (B2, 1), (A2, -1), (B1, 1)],
    ])
}

/// Invariants computed for a square presentation; P1 and P2 agree on all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareInvariants {
    pub abelianization: AbelianGroupDescriptor,
    pub generators: usize,
    pub relators: usize,
    pub square_shaped: bool,
    pub link_complete_bipartite: bool,
    pub valences: (usize, usize),
}

pub fn square_invariants(g: &GroupPresentation) -> Result<SquareInvariants> {
    let link = g.vertex_link()?;
    Ok(SquareInvariants {
        abelianization: g.abelianization(),
        generators: g.generators.len(),
        relators: g.relators.len(),
        square_shaped: g.is_square_shaped(),
        link_complete_bipartite: link.is_complete_bipartite(),
        valences: (link.black().len(), link.white().len()),
    })
}
