//! Arithmetic circuits over shared values.
//!
//! Gates are stored in topological order. Evaluation groups multiplications
//! by multiplicative depth, so a circuit of depth `d` costs `d` batched
//! multiplication rounds; linear gates are local.

use mediatorless_sharing::Field;
use serde::{Deserialize, Serialize};

use crate::gates::gate_multiply;
use crate::{Mpc, MpcError, Shares};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Wire(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    Input(usize),
    Const(u64),
    Add(Wire, Wire),
    Sub(Wire, Wire),
    Scale(u64, Wire),
    Mul(Wire, Wire),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    modulus: u64,
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    #[serde(skip)]
    known: Vec<Option<u64>>,
}

impl Circuit {
    pub fn new(field: &Field, inputs: usize) -> Self {
        let mut c = Circuit { modulus: field.modulus(), inputs, gates: Vec::new(), outputs: Vec::new(), known: Vec::new() };
        for i in 0..inputs {
            c.push(Gate::Input(i), None);
        }
        c
    }

    fn field(&self) -> Field {
        Field::new(self.modulus).expect("built from a field")
    }

    fn push(&mut self, g: Gate, known: Option<u64>) -> Wire {
        self.gates.push(g);
        self.known.push(known);
        Wire(self.gates.len() - 1)
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.inputs);
        Wire(i)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn output(&mut self, w: Wire) {
        self.outputs.push(w);
    }

    pub fn constant(&mut self, v: u64) -> Wire {
        let v = self.field().reduce(v);
        self.push(Gate::Const(v), Some(v))
    }

    pub fn add(&mut self, a: Wire, b: Wire) -> Wire {
        let f = self.field();
        match (self.known[a.0], self.known[b.0]) {
            (Some(x), Some(y)) => self.constant(f.add(x, y)),
            (Some(0), _) => b,
            (_, Some(0)) => a,
            _ => self.push(Gate::Add(a, b), None),
        }
    }

    pub fn sub(&mut self, a: Wire, b: Wire) -> Wire {
        let f = self.field();
        match (self.known[a.0], self.known[b.0]) {
            (Some(x), Some(y)) => self.constant(f.sub(x, y)),
            (_, Some(0)) => a,
            _ => self.push(Gate::Sub(a, b), None),
        }
    }

    pub fn scale(&mut self, c: u64, a: Wire) -> Wire {
        let f = self.field();
        let c = f.reduce(c);
        match (c, self.known[a.0]) {
            (_, Some(x)) => self.constant(f.mul(c, x)),
            (0, _) => self.constant(0),
            (1, _) => a,
            _ => self.push(Gate::Scale(c, a), None),
        }
    }

    /// Multiplication by a known constant is folded into `scale`.
    pub fn mul(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.known[a.0], self.known[b.0]) {
            (Some(x), _) => self.scale(x, b),
            (_, Some(y)) => self.scale(y, a),
            _ => self.push(Gate::Mul(a, b), None),
        }
    }

    pub fn sum(&mut self, ws: &[Wire]) -> Wire {
        let zero = self.constant(0);
        ws.iter().fold(zero, |acc, &w| self.add(acc, w))
    }

    /// `Σ c_i w_i`.
    pub fn linear(&mut self, terms: &[(u64, Wire)]) -> Wire {
        let scaled: Vec<Wire> = terms.iter().map(|&(c, w)| self.scale(c, w)).collect();
        self.sum(&scaled)
    }

    pub fn pow(&mut self, a: Wire, mut e: u64) -> Wire {
        let mut result = self.constant(1);
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// 1 when `a = v`, else 0, for any field value of `a`.
    pub fn indicator(&mut self, a: Wire, v: u64) -> Wire {
        let q = self.modulus;
        let c = self.constant(v);
        let d = self.sub(a, c);
        let p = self.pow(d, q - 1);
        let one = self.constant(1);
        self.sub(one, p)
    }

    /// Multiplication gates by depth, 1-based; 0 for linear gates.
    fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            d[i] = match *g {
                Gate::Input(_) | Gate::Const(_) => 0,
                Gate::Add(a, b) | Gate::Sub(a, b) => d[a.0].max(d[b.0]),
                Gate::Scale(_, a) => d[a.0],
                Gate::Mul(a, b) => d[a.0].max(d[b.0]) + 1,
            };
        }
        d
    }

    pub fn multiplicative_depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn multiplications(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Mul(..))).count()
    }

    /// Plain evaluation on field values, for testing.
    pub fn eval_plain(&self, inputs: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut v = vec![0; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            v[i] = match *g {
                Gate::Input(j) => f.reduce(inputs[j]),
                Gate::Const(c) => c,
                Gate::Add(a, b) => f.add(v[a.0], v[b.0]),
                Gate::Sub(a, b) => f.sub(v[a.0], v[b.0]),
                Gate::Scale(c, a) => f.mul(c, v[a.0]),
                Gate::Mul(a, b) => f.mul(v[a.0], v[b.0]),
            };
        }
        self.outputs.iter().map(|w| v[w.0]).collect()
    }
}

/// Evaluates `circuit` on shared inputs `[player][input]`, returning shares
/// `[player][output]`.
pub fn evaluate_circuit(mpc: &mut Mpc, circuit: &Circuit, inputs: &Shares) -> Result<Shares, MpcError> {
    let f = mpc.field;
    let n = mpc.n;
    if circuit.modulus != f.modulus() || inputs.len() != n || inputs.iter().any(|s| s.len() != circuit.inputs) {
        return Err(MpcError::Mismatch);
    }
    let depths = circuit.depths();
    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let mut vals: Vec<Vec<u64>> = vec![vec![0; circuit.gates.len()]; n];
    let mut done = vec![false; circuit.gates.len()];
    for level in 0..=max_depth {
        for (g, gate) in circuit.gates.iter().enumerate() {
            if done[g] || depths[g] != level || matches!(gate, Gate::Mul(..)) {
                continue;
            }
            for (i, v) in vals.iter_mut().enumerate() {
                v[g] = match *gate {
                    Gate::Input(j) => inputs[i][j],
                    Gate::Const(c) => c,
                    Gate::Add(a, b) => f.add(v[a.0], v[b.0]),
                    Gate::Sub(a, b) => f.sub(v[a.0], v[b.0]),
                    Gate::Scale(c, a) => f.mul(c, v[a.0]),
                    Gate::Mul(..) => unreachable!(),
                };
            }
            done[g] = true;
        }
        let batch: Vec<usize> = (0..circuit.gates.len()).filter(|&g| depths[g] == level + 1 && matches!(circuit.gates[g], Gate::Mul(..))).collect();
        if batch.is_empty() {
            continue;
        }
        let (a, b): (Shares, Shares) = (0..n)
            .map(|i| {
                batch
                    .iter()
                    .map(|&g| match circuit.gates[g] {
                        Gate::Mul(x, y) => (vals[i][x.0], vals[i][y.0]),
                        _ => unreachable!(),
                    })
                    .unzip()
            })
            .unzip();
        let prod = gate_multiply(mpc, &format!("mul{}", level + 1), &a, &b)?;
        for (i, row) in prod.into_iter().enumerate() {
            for (slot, &g) in batch.iter().enumerate() {
                vals[i][g] = row[slot];
            }
        }
        for &g in &batch {
            done[g] = true;
        }
    }
    Ok(vals.into_iter().map(|v| circuit.outputs.iter().map(|w| v[w.0]).collect()).collect())
}
