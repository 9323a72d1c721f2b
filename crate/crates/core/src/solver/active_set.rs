use serde::Serialize;

use crate::Vector;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub weight: f64,
    pub vertex: Vector,
}

/// The iterate written as a convex combination of the vertices picked up so
/// far. Each iteration adds at most one atom.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ActiveSet {
    atoms: Vec<Atom>,
}

impl ActiveSet {
    pub fn new(start: Vector) -> Self {
        Self { atoms: vec![Atom { weight: 1.0, vertex: start }] }
    }

    /// Applies `x ← (1 − γ)x + γv` to the weights.
    pub fn update(&mut self, vertex: &Vector, gamma: f64) {
        if gamma >= 1.0 {
            self.atoms.clear();
            self.atoms.push(Atom { weight: 1.0, vertex: vertex.clone() });
            return;
        }
        if gamma <= 0.0 {
            return;
        }
        let keep = 1.0 - gamma;
        for atom in &mut self.atoms {
            atom.weight *= keep;
        }
        match self.atoms.iter_mut().find(|a| a.vertex == *vertex) {
            Some(atom) => atom.weight += gamma,
            None => self.atoms.push(Atom { weight: gamma, vertex: vertex.clone() }),
        }
        self.atoms.retain(|a| a.weight > 0.0);
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `Σ wᵢ vᵢ`.
    pub fn combination(&self) -> Vector {
        let dim = self.atoms[0].vertex.dim();
        let mut acc = vec![0.0; dim];
        for atom in &self.atoms {
            for (a, v) in acc.iter_mut().zip(atom.vertex.iter()) {
                *a += atom.weight * v;
            }
        }
        Vector::from_raw(acc)
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.atoms
    }
}
