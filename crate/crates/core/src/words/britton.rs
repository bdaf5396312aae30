//! Britton reduction to a canonical normal form.
//!
//! Elements are written as closed edge paths at the base vertex,
//! `g₀ e₁ g₁ e₂ … e_k g_k`, with tree edges kept as explicit steps. A word is
//! reduced by streaming right multiplication: before stepping along `e`, the
//! current vertex element is split as `r + S·c` with `S` the inclusion at the
//! start of `e` and `r` in the Hermite box of `S·ℤⁿ`; `c` is carried across the
//! edge. A step that backtracks with `r = 0` pinches instead.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use super::WordsError;
use crate::gog::{Generator, GoGSpec, GraphOfGroups, Step};
use crate::linalg::IntMatrix;
use crate::word::Word;

fn code(s: Step) -> u32 {
    (s.edge as u32) * 2 + u32::from(!s.forward)
}

fn decode(c: u32) -> Step {
    Step {
        edge: (c / 2) as usize,
        forward: c % 2 == 0,
    }
}

/// Canonical form of a group element. Two words represent the same element
/// iff their normal forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    n: usize,
    steps: Vec<u32>,
    /// `n` coordinates per syllable, then `n` for the tail.
    coords: Vec<i64>,
}

impl NormalForm {
    fn identity(n: usize) -> Self {
        NormalForm {
            n,
            steps: Vec::new(),
            coords: vec![0; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty() && self.coords.iter().all(|&c| c == 0)
    }

    /// Edge steps of the path, in order.
    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.steps.iter().map(|&c| decode(c))
    }

    /// Number of edge steps, tree edges included.
    pub fn path_length(&self) -> usize {
        self.steps.len()
    }

    /// Coset representative preceding step `i`.
    pub fn residue(&self, i: usize) -> &[i64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    /// Vertex element after the last step.
    pub fn tail(&self) -> &[i64] {
        &self.coords[self.coords.len() - self.n..]
    }

    /// The vertex-group vector when the element lies in the base vertex group.
    pub fn vertex_vector(&self) -> Option<&[i64]> {
        self.steps.is_empty().then(|| self.tail())
    }

    fn tail_mut(&mut self) -> &mut [i64] {
        let len = self.coords.len();
        &mut self.coords[len - self.n..]
    }
}

/// Inclusion data of one oriented edge, in checked 64-bit arithmetic.
#[derive(Clone, Debug)]
struct StepKernel {
    start: usize,
    end: usize,
    /// Inclusion at the start vertex, its adjugate and determinant.
    start_map: Vec<i64>,
    start_adj: Vec<i64>,
    start_det: i64,
    /// Upper-triangular Hermite basis of the start image.
    hermite: Vec<i64>,
    end_map: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Add { coord: usize, amount: i64 },
    Step(u32),
}

/// A compiled graph of groups that reduces words to [`NormalForm`]s.
#[derive(Clone, Debug)]
pub struct Reducer {
    graph: GraphOfGroups,
    n: usize,
    kernels: Vec<StepKernel>,
    /// Path of one positive occurrence of each generator.
    letter_paths: HashMap<String, (Generator, Vec<Move>)>,
    /// Generators `x^{±1}` in presentation order, positive first.
    alphabet: Vec<(String, i64)>,
}

fn to_i64(m: &IntMatrix) -> Result<Vec<i64>, WordsError> {
    let rows = m.to_i64_rows().ok_or(WordsError::LargeInclusion)?;
    Ok(rows.into_iter().flatten().collect())
}

fn ov<T>(x: Option<T>) -> Result<T, WordsError> {
    x.ok_or(WordsError::Overflow)
}

fn mat_vec(n: usize, m: &[i64], v: &[i64]) -> Result<Vec<i64>, WordsError> {
    (0..n)
        .map(|i| {
            (0..n).try_fold(0i64, |acc, j| {
                ov(m[i * n + j].checked_mul(v[j]).and_then(|p| acc.checked_add(p)))
            })
        })
        .collect()
}

impl Reducer {
    pub fn new(spec: &GoGSpec) -> Result<Self, WordsError> {
        Self::from_graph(GraphOfGroups::new(spec.clone())?)
    }

    pub fn from_graph(graph: GraphOfGroups) -> Result<Self, WordsError> {
        let n = graph.rank();
        let mut kernels = Vec::with_capacity(2 * graph.edge_count());
        for e in 0..graph.edge_count() {
            for forward in [true, false] {
                let s = Step { edge: e, forward };
                let start = graph.start_inclusion(s);
                kernels.push(StepKernel {
                    start: graph.step_start(s),
                    end: graph.step_end(s),
                    start_map: to_i64(start)?,
                    start_adj: to_i64(&start.adjugate())?,
                    start_det: i64::try_from(start.det()).map_err(|_| WordsError::LargeInclusion)?,
                    hermite: to_i64(&start.hermite_basis().expect("validated inclusion"))?,
                    end_map: to_i64(graph.end_inclusion(s))?,
                });
            }
        }
        let to_vertex = |v: usize| -> Vec<Move> { graph.tree_path(v).iter().map(|&s| Move::Step(code(s))).collect() };
        let from_vertex = |v: usize| -> Vec<Move> {
            graph
                .tree_path(v)
                .iter()
                .rev()
                .map(|&s| Move::Step(code(s.reverse())))
                .collect()
        };
        let mut letter_paths = HashMap::new();
        let mut alphabet = Vec::new();
        for (name, generator) in graph.generators() {
            let mut path = Vec::new();
            match *generator {
                Generator::Vertex { vertex, coord } => {
                    path.extend(to_vertex(vertex));
                    path.push(Move::Add { coord, amount: 1 });
                    path.extend(from_vertex(vertex));
                }
                Generator::Stable { edge } => {
                    path.extend(to_vertex(graph.source(edge)));
                    path.push(Move::Step(code(Step { edge, forward: true })));
                    path.extend(from_vertex(graph.target(edge)));
                }
            }
            letter_paths.insert(name.clone(), (*generator, path));
            alphabet.push((name.clone(), 1));
            alphabet.push((name.clone(), -1));
        }
        Ok(Reducer {
            graph,
            n,
            kernels,
            letter_paths,
            alphabet,
        })
    }

    pub fn graph(&self) -> &GraphOfGroups {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm::identity(self.n)
    }

    /// Symmetric generating set: every generator and its inverse.
    pub fn alphabet(&self) -> &[(String, i64)] {
        &self.alphabet
    }

    fn current_vertex(&self, nf: &NormalForm) -> usize {
        nf.steps
            .last()
            .map_or(self.graph.base_vertex(), |&c| self.kernels[c as usize].end)
    }

    fn push_step(&self, nf: &mut NormalForm, c: u32) -> Result<(), WordsError> {
        let n = self.n;
        let k = &self.kernels[c as usize];
        debug_assert_eq!(k.start, self.current_vertex(nf));
        let g = nf.tail().to_vec();
        let mut r = g.clone();
        for j in (0..n).rev() {
            let q = Integer::div_floor(&r[j], &k.hermite[j * n + j]);
            if q != 0 {
                for i in 0..=j {
                    r[i] = ov(q.checked_mul(k.hermite[i * n + j]).and_then(|p| r[i].checked_sub(p)))?;
                }
            }
        }
        let diff: Vec<i64> = ov(g.iter().zip(&r).map(|(a, b)| a.checked_sub(*b)).collect())?;
        let scaled = mat_vec(n, &k.start_adj, &diff)?;
        let carried: Vec<i64> = scaled
            .iter()
            .map(|s| {
                debug_assert_eq!(s % k.start_det, 0);
                s / k.start_det
            })
            .collect();
        let backtracks = nf.steps.last() == Some(&(c ^ 1));
        if backtracks && r.iter().all(|&x| x == 0) {
            // prev · S(c) · prev⁻¹ = (start inclusion of prev)(c)
            let prev = nf.steps.pop().expect("nonempty") as usize;
            let image = mat_vec(n, &self.kernels[prev].start_map, &carried)?;
            let len = nf.coords.len();
            nf.coords.truncate(len - n);
            for (t, x) in nf.tail_mut().iter_mut().zip(image) {
                *t = ov(t.checked_add(x))?;
            }
        } else {
            let image = mat_vec(n, &k.end_map, &carried)?;
            nf.tail_mut().copy_from_slice(&r);
            nf.coords.extend(image);
            nf.steps.push(c);
        }
        Ok(())
    }

    fn apply(&self, nf: &mut NormalForm, m: Move, times: i64) -> Result<(), WordsError> {
        match m {
            Move::Add { coord, amount } => {
                let delta = ov(amount.checked_mul(times))?;
                let t = &mut nf.tail_mut()[coord];
                *t = ov(t.checked_add(delta))?;
            }
            Move::Step(c) => {
                let c = if times < 0 { c ^ 1 } else { c };
                self.push_step(nf, c)?;
            }
        }
        Ok(())
    }

    /// Right-multiplies by `name^exp`.
    pub fn multiply(&self, nf: &mut NormalForm, name: &str, exp: i64) -> Result<(), WordsError> {
        let (generator, path) = self
            .letter_paths
            .get(name)
            .ok_or_else(|| crate::gog::GogError::UnknownLetter(name.to_string()))?;
        match generator {
            // Conjugating by the tree path, the exponent collapses into one addition.
            Generator::Vertex { .. } => {
                for &m in path {
                    self.apply(nf, m, if matches!(m, Move::Add { .. }) { exp } else { 1 })?;
                }
            }
            Generator::Stable { .. } => {
                for _ in 0..exp.unsigned_abs() {
                    if exp > 0 {
                        for &m in path {
                            self.apply(nf, m, 1)?;
                        }
                    } else {
                        for &m in path.iter().rev() {
                            self.apply(nf, m, -1)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn reduce(&self, w: &Word) -> Result<NormalForm, WordsError> {
        let mut nf = self.identity();
        for l in w.letters() {
            self.multiply(&mut nf, &l.name, l.exp)?;
        }
        Ok(nf)
    }

    /// Product `a·b` of two normal forms.
    pub fn product(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm, WordsError> {
        self.reduce(&self.to_word(a).concat(&self.to_word(b)))
    }

    /// Element of the base vertex group with the given coordinates.
    pub fn base_element(&self, v: &[i64]) -> Result<NormalForm, WordsError> {
        if v.len() != self.n {
            return Err(WordsError::BadElement {
                got: v.len(),
                expected: self.n,
            });
        }
        Ok(NormalForm {
            n: self.n,
            steps: Vec::new(),
            coords: v.to_vec(),
        })
    }

    /// A word in the presentation alphabet representing `nf`; tree edges are dropped.
    pub fn to_word(&self, nf: &NormalForm) -> Word {
        let mut w = Word::empty();
        let mut vertex = self.graph.base_vertex();
        for (i, step) in nf.steps().enumerate() {
            for (name, &x) in self.graph.vertex_letters(vertex).iter().zip(nf.residue(i)) {
                w.push(name, x);
            }
            if !self.graph.in_tree(step.edge) {
                w.push(&self.graph.edge(step.edge).name, if step.forward { 1 } else { -1 });
            }
            vertex = self.graph.step_end(step);
        }
        for (name, &x) in self.graph.vertex_letters(vertex).iter().zip(nf.tail()) {
            w.push(name, x);
        }
        w
    }

    pub fn render(&self, nf: &NormalForm) -> String {
        struct Show<'a>(&'a Reducer, &'a NormalForm);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let (r, nf) = (self.0, self.1);
                let vector = |v: &[i64]| {
                    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                    format!("({})", parts.join(","))
                };
                let mut parts = Vec::new();
                for (i, step) in nf.steps().enumerate() {
                    if nf.residue(i).iter().any(|&x| x != 0) {
                        parts.push(vector(nf.residue(i)));
                    }
                    let name = &r.graph.edge(step.edge).name;
                    let name = if r.graph.in_tree(step.edge) {
                        format!("[{name}]")
                    } else {
                        name.clone()
                    };
                    parts.push(if step.forward { name } else { format!("{name}^-1") });
                }
                if nf.tail().iter().any(|&x| x != 0) || parts.is_empty() {
                    parts.push(vector(nf.tail()));
                }
                write!(f, "{}", parts.join(" · "))
            }
        }
        Show(self, nf).to_string()
    }
}

pub fn britton_reduce(spec: &GoGSpec, w: &Word) -> Result<NormalForm, WordsError> {
    Reducer::new(spec)?.reduce(w)
}

pub fn is_identity(spec: &GoGSpec, w: &Word) -> Result<bool, WordsError> {
    Ok(britton_reduce(spec, w)?.is_identity())
}
