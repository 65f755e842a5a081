use std::collections::{BTreeMap, HashMap};

use crate::poly::RationalComplex;

use super::{NcExpression, RewriteError, Word};

/// Default cap on rewrite applications per normal-form call.
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// Which adjacent inversion is rewritten first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    LeftmostInversion,
    RightmostInversion,
}

type IWord = Vec<u16>;
type IExpr = Vec<(IWord, RationalComplex)>;

/// Quadratic normal-ordering rules over an ordered generator set.
///
/// The generator order is the target normal order. Each rule rewrites an
/// out-of-order adjacent pair `g_a g_b` (`a` after `b`) into a combination of
/// normal-ordered pairs, single generators and scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    generators: Vec<String>,
    rules: BTreeMap<(u16, u16), IExpr>,
}

impl RewriteSystem {
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self, RewriteError> {
        let generators: Vec<String> = generators.iter().map(|g| g.as_ref().to_string()).collect();
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(RewriteError::InvalidRule(format!("generator '{g}' listed twice")));
            }
        }
        Ok(Self { generators, rules: BTreeMap::new() })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    fn index(&self, name: &str) -> Result<u16, RewriteError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|i| i as u16)
            .ok_or_else(|| RewriteError::UnknownGenerator(name.to_string()))
    }

    fn to_iword(&self, w: &Word) -> Result<IWord, RewriteError> {
        w.iter().map(|g| self.index(g)).collect()
    }

    fn to_word(&self, w: &IWord) -> Word {
        w.iter().map(|&i| self.generators[i as usize].clone()).collect()
    }

    /// Adds the rule `left.0 left.1 → rhs`.
    pub fn with_rule(mut self, left: (&str, &str), rhs: &NcExpression) -> Result<Self, RewriteError> {
        let a = self.index(left.0)?;
        let b = self.index(left.1)?;
        if a <= b {
            return Err(RewriteError::InvalidRule(format!(
                "left side {}{} is already in normal order",
                left.0, left.1
            )));
        }
        let mut out = Vec::new();
        for (w, c) in rhs.terms() {
            let iw = self.to_iword(w)?;
            if iw.len() > 2 || (iw.len() == 2 && iw[0] > iw[1]) {
                return Err(RewriteError::InvalidRule(format!(
                    "right side of {}{} contains the non-normal word {}",
                    left.0,
                    left.1,
                    w.join("*")
                )));
            }
            out.push((iw, c.clone()));
        }
        if self.rules.insert((a, b), out).is_some() {
            return Err(RewriteError::InvalidRule(format!("duplicate rule for {}{}", left.0, left.1)));
        }
        Ok(self)
    }

    /// The rules as `(left pair, right side)` in generator-index order.
    pub fn rules(&self) -> Vec<((String, String), NcExpression)> {
        self.rules
            .iter()
            .map(|(&(a, b), rhs)| {
                let left = (self.generators[a as usize].clone(), self.generators[b as usize].clone());
                let e = NcExpression::from_terms(rhs.iter().map(|(w, c)| (self.to_word(w), c.clone())));
                (left, e)
            })
            .collect()
    }

    /// `q`-oscillator `XY − qYX = 1` with normal order `Y < X`.
    pub fn q_oscillator(q: RationalComplex) -> Self {
        let rhs = NcExpression::word(&["Y", "X"], q).add(&NcExpression::one());
        Self::new(&["Y", "X"]).and_then(|s| s.with_rule(("X", "Y"), &rhs)).expect("valid builtin")
    }

    /// Weyl pair `XY = qYX`.
    pub fn weyl(q: RationalComplex) -> Self {
        let rhs = NcExpression::word(&["Y", "X"], q);
        Self::new(&["Y", "X"]).and_then(|s| s.with_rule(("X", "Y"), &rhs)).expect("valid builtin")
    }

    /// Symmetric (Z-)presentation `XY − qYX = Z + C₃`, `YZ − qZY = X + C₁`,
    /// `ZX − qXZ = Y + C₂` with normal order `Y < Z < X`.
    pub fn aw_z(
        q: RationalComplex,
        c1: RationalComplex,
        c2: RationalComplex,
        c3: RationalComplex,
    ) -> Result<Self, RewriteError> {
        let qi = q.inv().ok_or(RewriteError::ZeroParameter("q"))?;
        let gen = NcExpression::generator;
        let scalar = NcExpression::scalar;
        // XY → qYX + Z + C3
        let xy = NcExpression::word(&["Y", "X"], q).add(&gen("Z")).add(&scalar(c3));
        // ZY → q⁻¹YZ − q⁻¹X − q⁻¹C1
        let zy = NcExpression::word(&["Y", "Z"], RationalComplex::one())
            .sub(&gen("X"))
            .sub(&scalar(c1))
            .scale(&qi);
        // XZ → q⁻¹ZX − q⁻¹Y − q⁻¹C2
        let xz = NcExpression::word(&["Z", "X"], RationalComplex::one())
            .sub(&gen("Y"))
            .sub(&scalar(c2))
            .scale(&qi);
        Self::new(&["Y", "Z", "X"])?
            .with_rule(("X", "Y"), &xy)?
            .with_rule(("Z", "Y"), &zy)?
            .with_rule(("X", "Z"), &xz)
    }

    pub fn normal_form(&self, e: &NcExpression) -> Result<NcExpression, RewriteError> {
        self.normal_form_with(e, Strategy::default(), DEFAULT_STEP_BUDGET)
    }

    /// Normal ordering with an explicit strategy and step budget.
    pub fn normal_form_with(
        &self,
        e: &NcExpression,
        strategy: Strategy,
        budget: usize,
    ) -> Result<NcExpression, RewriteError> {
        // Pending terms keyed by (length, word): the largest is processed first so that
        // equal descendants merge before they are rewritten again.
        let mut pending: BTreeMap<(usize, IWord), RationalComplex> = BTreeMap::new();
        for (w, c) in e.terms() {
            let iw = self.to_iword(w)?;
            add_to(&mut pending, iw, c.clone());
        }
        let mut done: HashMap<IWord, RationalComplex> = HashMap::new();
        let mut steps = 0usize;
        while let Some(((_, w), c)) = pending.pop_last() {
            let Some(p) = find_inversion(&w, strategy, &self.rules)? else {
                let slot = done.entry(w).or_default();
                *slot += &c;
                continue;
            };
            steps += 1;
            if steps > budget {
                return Err(RewriteError::StepBudget(budget));
            }
            let rhs = &self.rules[&(w[p], w[p + 1])];
            for (rw, rc) in rhs {
                let mut nw = Vec::with_capacity(w.len());
                nw.extend_from_slice(&w[..p]);
                nw.extend_from_slice(rw);
                nw.extend_from_slice(&w[p + 2..]);
                add_to(&mut pending, nw, &c * rc);
            }
        }
        Ok(NcExpression::from_terms(
            done.into_iter().map(|(w, c)| (self.to_word(&w), c)),
        ))
    }

    /// `normal_form(ab − ba)`.
    pub fn commutator_nf(&self, a: &NcExpression, b: &NcExpression) -> Result<NcExpression, RewriteError> {
        self.normal_form(&a.mul(b).sub(&b.mul(a)))
    }

    /// `ad_h^n x`, normal-ordered after every step.
    pub fn ad_power_nf(&self, h: &str, x: &NcExpression, n: usize) -> Result<NcExpression, RewriteError> {
        self.index(h)?;
        let hg = NcExpression::generator(h);
        let mut acc = self.normal_form(x)?;
        for _ in 0..n {
            acc = self.commutator_nf(&hg, &acc)?;
        }
        Ok(acc)
    }

    /// True when every word is sorted in the generator order.
    pub fn is_normal(&self, e: &NcExpression) -> Result<bool, RewriteError> {
        for (w, _) in e.terms() {
            let iw = self.to_iword(w)?;
            if iw.windows(2).any(|p| p[0] > p[1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn add_to(map: &mut BTreeMap<(usize, IWord), RationalComplex>, w: IWord, c: RationalComplex) {
    if c.is_zero() {
        return;
    }
    let key = (w.len(), w);
    let slot = map.entry(key.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

/// Position of the adjacent inversion to rewrite, or `None` for a normal word.
fn find_inversion(
    w: &[u16],
    strategy: Strategy,
    rules: &BTreeMap<(u16, u16), IExpr>,
) -> Result<Option<usize>, RewriteError> {
    let mut positions = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]);
    let p = match strategy {
        Strategy::LeftmostInversion => positions.next(),
        Strategy::RightmostInversion => positions.next_back(),
    };
    match p {
        Some(p) if !rules.contains_key(&(w[p], w[p + 1])) => Err(RewriteError::MissingRule(p)),
        other => Ok(other),
    }
}
