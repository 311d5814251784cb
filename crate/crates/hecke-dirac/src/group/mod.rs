//! Finite complex reflection groups: enumeration, reflections, classes,
//! characters and representations.

mod catalogue;
mod invariants;
mod rep;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::scalar::Cyclo;

pub use catalogue::CATALOGUE;
pub use rep::{diagonal_action, multiplicities, subsets_of_size, WRep};

#[derive(Clone, Debug)]
pub struct Reflection {
    pub element: usize,
    /// α_s ∈ 𝔥*, coordinates in the dual basis.
    pub alpha: Vec<Cyclo>,
    /// α_s^∨ ∈ 𝔥.
    pub alpha_check: Vec<Cyclo>,
    pub lambda: Cyclo,
    /// A fixed square root of λ_s.
    pub sqrt_lambda: Cyclo,
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    pub rep: WRep,
}

#[derive(Debug)]
pub struct ReflectionGroup {
    pub id: String,
    pub n: usize,
    pub conductor: u32,
    pub gens: Vec<usize>,
    pub elements: Vec<Mat>,
    /// g^{-T}: the action on 𝔥* in the dual basis.
    pub dual: Vec<Mat>,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    /// Each element as a word in the generators (indices into `gens`).
    pub words: Vec<Vec<usize>>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub reflections: Vec<Reflection>,
    pub reflection_of: HashMap<usize, usize>,
    /// Reflection classes with their names, in class order.
    pub reflection_classes: Vec<(usize, String)>,
    pub irreps: Vec<Irrep>,
    /// characters[i][k] = χ_i on class k.
    pub characters: Vec<Vec<Cyclo>>,
    pub invariant_degrees: Vec<u32>,
    /// Fundamental invariants in S(𝔥*) (variables x_i).
    pub invariant_generators: Vec<Poly>,
    /// Fundamental invariants in S(𝔥) (variables y_i).
    pub invariant_generators_y: Vec<Poly>,
    /// ⟨α_s^∨, α_s⟩ for every reflection: 2 for real groups, 1 otherwise.
    pub root_norm: Cyclo,
    pub real: bool,
    /// All elements are rational orthogonal matrices.
    pub orthonormal: bool,
    index: HashMap<Vec<BigRational>, usize>,
}

fn key_of(m: &Mat, conductor: u32) -> Vec<BigRational> {
    m.data.iter().flat_map(|v| v.coeffs_in(conductor)).collect()
}

fn cache() -> &'static Mutex<HashMap<String, Arc<ReflectionGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ReflectionGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch from the process-wide cache) a catalogue group.
pub fn build_group(id: &str) -> Result<Arc<ReflectionGroup>> {
    let data = catalogue::lookup(id)?;
    if let Some(g) = cache().lock().unwrap().get(&data.id) {
        return Ok(g.clone());
    }
    let g = Arc::new(ReflectionGroup::from_data(data)?);
    cache()
        .lock()
        .unwrap()
        .insert(g.id.clone(), g.clone());
    Ok(g)
}

impl ReflectionGroup {
    fn from_data(data: catalogue::GroupData) -> Result<Self> {
        let n = data.n;
        let cond = data.conductor;
        let mut elements = vec![Mat::identity(n)];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(key_of(&elements[0], cond), 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, g) in data.gens.iter().enumerate() {
                let prod = &elements[i] * g;
                let key = key_of(&prod, cond);
                if index.contains_key(&key) {
                    continue;
                }
                index.insert(key, elements.len());
                let mut w = words[i].clone();
                w.push(k);
                words.push(w);
                elements.push(prod);
                queue.push_back(elements.len() - 1);
            }
            if elements.len() > 2000 {
                return Err(Error::UnknownGroup(format!("{} is too large", data.id)));
            }
        }
        let order = elements.len();
        let lookup = |m: &Mat| index[&key_of(m, cond)];
        let table: Vec<Vec<usize>> = (0..order)
            .map(|i| (0..order).map(|j| lookup(&(&elements[i] * &elements[j]))).collect())
            .collect();
        let inverse: Vec<usize> = (0..order)
            .map(|i| (0..order).find(|&j| table[i][j] == 0).expect("finite group"))
            .collect();
        let dual: Vec<Mat> = inverse.iter().map(|&j| elements[j].transpose()).collect();

        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..order).map(|h| table[table[h][g]][inverse[h]]).collect();
            cls.sort_unstable();
            cls.dedup();
            for &x in &cls {
                class_of[x] = classes.len();
            }
            classes.push(cls);
        }

        let real_candidate = elements
            .iter()
            .all(|m| m.data.iter().all(|v| v == &v.conj()))
            || data.id.starts_with("I2");
        let gens: Vec<usize> = data.gens.iter().map(lookup).collect();

        let mut reflections = Vec::new();
        let mut reflection_of = HashMap::new();
        let mut lambdas_real = true;
        for (g, m) in elements.iter().enumerate() {
            let diff = m - &Mat::identity(n);
            if diff.rank() != 1 {
                continue;
            }
            let lambda = &m.trace() - &Cyclo::from_int(n as i64 - 1);
            if lambda != Cyclo::from_int(-1) {
                lambdas_real = false;
            }
            reflection_of.insert(g, reflections.len());
            reflections.push((g, lambda, diff));
        }
        let real = real_candidate && lambdas_real;
        let root_norm = Cyclo::from_int(if real { 2 } else { 1 });
        let reflections: Vec<Reflection> = reflections
            .into_iter()
            .map(|(g, lambda, diff)| {
                reflection_data(g, lambda, &diff, &root_norm, cond, class_of[g])
            })
            .collect();

        let mut reflection_classes = Vec::new();
        for (k, cls) in classes.iter().enumerate() {
            if !reflection_of.contains_key(&cls[0]) {
                continue;
            }
            let name = data
                .reflection_class_names
                .iter()
                .find(|(gi, _)| class_of[gens[*gi]] == k)
                .map(|(_, nm)| nm.clone())
                .unwrap_or_else(|| format!("c{}", reflection_classes.len() + 1));
            reflection_classes.push((k, name));
        }

        let orthonormal = elements.iter().all(|m| {
            m.data.iter().all(Cyclo::is_rational) && &m.transpose() * m == Mat::identity(n)
        });

        let mut g = ReflectionGroup {
            id: data.id,
            n,
            conductor: cond,
            gens,
            elements,
            dual,
            table,
            inverse,
            words,
            classes,
            class_of,
            reflections,
            reflection_of,
            reflection_classes,
            irreps: Vec::new(),
            characters: Vec::new(),
            invariant_degrees: Vec::new(),
            invariant_generators: Vec::new(),
            invariant_generators_y: Vec::new(),
            root_norm,
            real,
            orthonormal,
            index,
        };
        for model in data.irreps {
            let rep = WRep::from_generators(&g, &model.gens);
            g.irreps.push(Irrep {
                label: model.label,
                dim: rep.dim,
                rep,
            });
        }
        g.characters = g
            .irreps
            .iter()
            .map(|ir| g.classes.iter().map(|c| ir.rep.mats[c[0]].trace()).collect())
            .collect();
        g.validate_character_table()?;
        let (degs, gx) = invariants::fundamental_invariants(&g, &g.dual);
        let (_, gy) = invariants::fundamental_invariants(&g, &g.elements);
        g.invariant_degrees = degs;
        g.invariant_generators = gx;
        g.invariant_generators_y = gy;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn conj_by(&self, h: usize, w: usize) -> usize {
        // h w h^{-1}
        self.table[self.table[h][w]][self.inverse[h]]
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(&key_of(m, self.conductor)).copied()
    }

    /// Block matrix of w on V = 𝔥* ⊕ 𝔥 in the basis (x_1..x_n, y_1..y_n).
    pub fn v_matrix(&self, w: usize) -> Mat {
        let n = self.n;
        let mut m = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.dual[w].get(i, j).clone());
                m.set(n + i, n + j, self.elements[w].get(i, j).clone());
            }
        }
        m
    }

    pub fn irrep_index(&self, label: &str) -> Result<usize> {
        self.irreps
            .iter()
            .position(|ir| ir.label == label)
            .ok_or_else(|| Error::UnknownIrrep(label.to_string()))
    }

    pub fn irrep(&self, label: &str) -> Result<&Irrep> {
        Ok(&self.irreps[self.irrep_index(label)?])
    }

    pub fn labels(&self) -> Vec<String> {
        self.irreps.iter().map(|ir| ir.label.clone()).collect()
    }

    /// χ_i(g) for an element index.
    pub fn character(&self, irrep: usize, g: usize) -> &Cyclo {
        &self.characters[irrep][self.class_of[g]]
    }

    /// det_𝔥 as a function on elements.
    pub fn det(&self, g: usize) -> Cyclo {
        self.elements[g].det()
    }

    /// Label of the irrep with character χ_σ · det^k (k = ±1).
    pub fn twist_by_det(&self, sigma: usize, power: i32) -> usize {
        let target: Vec<Cyclo> = self
            .classes
            .iter()
            .map(|c| {
                let d = self.det(c[0]);
                let d = if power >= 0 { d } else { d.conj() };
                self.characters[sigma][self.class_of[c[0]]].clone() * d
            })
            .collect();
        self.characters
            .iter()
            .position(|row| *row == target)
            .expect("det twist of an irrep is irreducible")
    }

    /// The label of det_𝔥 itself.
    pub fn det_label(&self) -> &str {
        &self.irreps[self.twist_by_det(0, 1)].label
    }

    pub fn is_reflection(&self, g: usize) -> bool {
        self.reflection_of.contains_key(&g)
    }

    pub fn reflection(&self, g: usize) -> Option<&Reflection> {
        self.reflection_of.get(&g).map(|&i| &self.reflections[i])
    }

    /// Position of a class in `reflection_classes`, by name.
    pub fn reflection_class_by_name(&self, name: &str) -> Option<usize> {
        self.reflection_classes
            .iter()
            .find(|(_, nm)| nm == name)
            .map(|(k, _)| *k)
    }

    fn validate_character_table(&self) -> Result<()> {
        let order = Cyclo::from_int(self.order() as i64);
        let dims: usize = self.irreps.iter().map(|ir| ir.dim * ir.dim).sum();
        if dims != self.order() || self.irreps.len() != self.classes.len() {
            return Err(Error::NotARepresentation(format!(
                "{}: catalogue irreps do not match the class count",
                self.id
            )));
        }
        for i in 0..self.irreps.len() {
            for j in 0..self.irreps.len() {
                let ip: Cyclo = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        Cyclo::from_int(c.len() as i64)
                            * &self.characters[i][k]
                            * self.characters[j][k].conj()
                    })
                    .sum();
                let expect = if i == j { order.clone() } else { Cyclo::zero() };
                if ip != expect {
                    return Err(Error::NotARepresentation(format!(
                        "{}: characters {} and {} are not orthonormal",
                        self.id, self.irreps[i].label, self.irreps[j].label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Σ_g f(g) conj(χ(g)) / |W| for a function given on elements.
    pub fn inner_with_irrep(&self, values: &[Cyclo], irrep: usize) -> Cyclo {
        let s: Cyclo = (0..self.order())
            .map(|g| &values[g] * &self.character(irrep, g).conj())
            .sum();
        s / Cyclo::from_int(self.order() as i64)
    }

    /// Fundamental invariants with variables x (S(𝔥*)) checked for invariance.
    pub fn is_invariant_x(&self, p: &Poly) -> bool {
        self.dual.iter().all(|m| &p.substitute(m) == p)
    }

    pub fn is_invariant_y(&self, p: &Poly) -> bool {
        self.elements.iter().all(|m| &p.substitute(m) == p)
    }

    /// Pairing ⟨x, y⟩ of covector and vector coordinates.
    pub fn pair(a: &[Cyclo], b: &[Cyclo]) -> Cyclo {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Copy of the group with every (α_s, α_s^∨) replaced by (u α_s, u⁻¹ α_s^∨).
    pub fn rescaled_roots(&self, u: &Cyclo) -> ReflectionGroup {
        let ui = u.inv();
        ReflectionGroup {
            reflections: self
                .reflections
                .iter()
                .map(|r| Reflection {
                    alpha: r.alpha.iter().map(|a| a * u).collect(),
                    alpha_check: r.alpha_check.iter().map(|a| a * &ui).collect(),
                    ..r.clone()
                })
                .collect(),
            id: self.id.clone(),
            n: self.n,
            conductor: self.conductor,
            gens: self.gens.clone(),
            elements: self.elements.clone(),
            dual: self.dual.clone(),
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            words: self.words.clone(),
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
            reflection_of: self.reflection_of.clone(),
            reflection_classes: self.reflection_classes.clone(),
            irreps: self.irreps.clone(),
            characters: self.characters.clone(),
            invariant_degrees: self.invariant_degrees.clone(),
            invariant_generators: self.invariant_generators.clone(),
            invariant_generators_y: self.invariant_generators_y.clone(),
            root_norm: self.root_norm.clone(),
            real: self.real,
            orthonormal: self.orthonormal,
            index: self.index.clone(),
        }
    }
}

fn reflection_data(
    g: usize,
    lambda: Cyclo,
    diff: &Mat,
    norm: &Cyclo,
    conductor: u32,
    class: usize,
) -> Reflection {
    let n = diff.rows;
    // s - I = κ α^∨ αᵀ with κ = (λ-1)/N
    let j = (0..n)
        .find(|&j| (0..n).any(|i| !diff.get(i, j).is_zero()))
        .expect("reflection moves something");
    let mut check = diff.col(j);
    let i = (0..n).find(|&i| !check[i].is_zero()).unwrap();
    let kappa = &(&lambda - &Cyclo::one()) / norm;
    let denom = &kappa * &check[i];
    let mut alpha: Vec<Cyclo> = (0..n).map(|k| diff.get(i, k) / &denom).collect();
    let lead = alpha.iter().find(|a| !a.is_zero()).unwrap().clone();
    let lead_inv = lead.inv();
    for a in alpha.iter_mut() {
        *a = &*a * &lead_inv;
    }
    for c in check.iter_mut() {
        *c = &*c * &lead;
    }
    let big = 2 * conductor.max(1);
    let e = (0..big as i64)
        .find(|&e| Cyclo::zeta(big, e) == lambda)
        .expect("eigenvalue is a root of unity of the group conductor");
    Reflection {
        element: g,
        alpha,
        alpha_check: check,
        sqrt_lambda: Cyclo::zeta(2 * big, e),
        lambda,
        class,
    }
}
