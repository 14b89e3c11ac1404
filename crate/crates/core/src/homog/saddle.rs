use crate::error::{Error, Result};
use crate::game::PopulationVector;
use crate::lp::{lexicographic_min_point, optimal_face_program, solve, LinearProgram, Relation, Sense};
use crate::scalar::{dot, sum, Scalar};
use crate::Rational;

use super::model::{GainsModel, GainsProgram};

/// How a saddle point is picked from the product of the two optimal faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SaddleSelection {
    /// Minimize total money moved, `Σ x_i |m_i|`, then lexicographic
    /// minimum in `(r, y)`.
    #[default]
    MinTransfer,
    /// Lexicographic minimum in `(r, y)`.
    LexMin,
}

/// A payoff vector from `∂F(x)` paired with an optimal assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddlePoint<T = Rational> {
    pub value: T,
    pub x: Vec<T>,
    /// Per-capita payoffs.
    pub r: Vec<T>,
    /// Activity levels of the gains program.
    pub y: Vec<T>,
    pub labels: Vec<String>,
    /// Per-capita direct utility under `y` (zero off the support).
    pub direct: Vec<T>,
    /// Per-capita money transfers `direct_i - r_i` (zero off the support).
    pub m: Vec<T>,
    /// Duals of any extra rows (prices, for exchange economies).
    pub extra_duals: Vec<T>,
}

impl<T: Scalar> SaddlePoint<T> {
    /// Activities with positive level.
    pub fn assignment(&self) -> Vec<(&str, &T)> {
        self.labels
            .iter()
            .zip(&self.y)
            .filter(|(_, v)| !v.is_zero())
            .map(|(l, v)| (l.as_str(), v))
            .collect()
    }

    /// `Σ m_i x_i`, zero for every valid saddle point.
    pub fn transfer_balance(&self) -> T {
        dot(&self.m, &self.x)
    }
}

pub fn saddle_point<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<SaddlePoint<T>> {
    saddle_point_with(model, x, SaddleSelection::default())
}

pub fn saddle_point_with<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
    selection: SaddleSelection,
) -> Result<SaddlePoint<T>> {
    let program = model.gains_program(x)?;
    let value = solve(&program.lp)?.optimal()?.objective_value;
    select(&program, x, value, selection)
}

pub(crate) fn select<T: Scalar>(
    program: &GainsProgram<T>,
    x: &PopulationVector<T>,
    value: T,
    selection: SaddleSelection,
) -> Result<SaddlePoint<T>> {
    let n = program.n;
    let cols = program.num_columns();
    let rows = program.lp.num_constraints();
    let hidden = rows - n;
    let with_t = selection == SaddleSelection::MinTransfer;
    // Column layout: y | r | p | t
    let (r0, p0, t0) = (cols, cols + n, cols + rows);
    let width = t0 + if with_t { n } else { 0 };

    let mut objective = vec![T::zero(); width];
    if with_t {
        for v in objective[t0..].iter_mut() {
            *v = T::one();
        }
    }
    let mut lp = LinearProgram::new(Sense::Minimize, objective)?;
    for j in r0..t0 {
        lp.set_free(j)?;
    }
    let pad = |head: &[T], at: usize| -> Vec<T> {
        let mut row = vec![T::zero(); width];
        row[at..at + head.len()].clone_from_slice(head);
        row
    };
    for c in program.lp.constraints() {
        lp.add_constraint(pad(&c.coeffs, 0), c.relation, c.rhs.clone())?;
    }
    lp.add_constraint(pad(program.lp.objective(), 0), Relation::Eq, value.clone())?;
    for j in 0..cols {
        let column: Vec<T> = program.lp.constraints().iter().map(|c| c.coeffs[j].clone()).collect();
        lp.add_constraint(pad(&column, r0), Relation::Ge, program.lp.objective()[j].clone())?;
    }
    let rhs: Vec<T> = program.lp.constraints().iter().map(|c| c.rhs.clone()).collect();
    lp.add_constraint(pad(&rhs, r0), Relation::Eq, value.clone())?;
    if with_t {
        for i in 0..n {
            for sign in [T::one(), -T::one()] {
                let mut row = vec![T::zero(); width];
                for j in 0..cols {
                    row[j] = -(sign.clone() * program.direct[i][j].clone());
                }
                row[r0 + i] = sign.clone() * x.get(i).clone();
                row[t0 + i] = T::one();
                lp.add_constraint(row, Relation::Ge, T::zero())?;
            }
        }
    }

    let face = if with_t { optimal_face_program(&lp)? } else { lp };
    let order: Vec<usize> = (r0..r0 + n).chain(0..cols).collect();
    let point = lexicographic_min_point(&face, &order)?
        .ok_or_else(|| Error::Invariant("saddle-point program is infeasible".into()))?;

    let y = point[..cols].to_vec();
    let r = point[r0..p0].to_vec();
    let extra_duals = point[p0..p0 + hidden].to_vec();
    let mut direct = vec![T::zero(); n];
    let mut m = vec![T::zero(); n];
    for i in 0..n {
        if x.get(i).is_pos() {
            direct[i] = dot(&program.direct[i], &y) / x.get(i).clone();
            m[i] = direct[i].clone() - r[i].clone();
        }
    }
    let sp = SaddlePoint {
        value,
        x: x.as_slice().to_vec(),
        r,
        y,
        labels: program.labels.clone(),
        direct,
        m,
        extra_duals,
    };
    verify(program, &sp)?;
    Ok(sp)
}

fn verify<T: Scalar>(program: &GainsProgram<T>, sp: &SaddlePoint<T>) -> Result<()> {
    let payoff = dot(&sp.r, &sp.x);
    let total_direct = sum(
        &program
            .direct
            .iter()
            .map(|row| dot(row, &sp.y))
            .collect::<Vec<_>>(),
    );
    if !payoff.approx_eq(&sp.value) {
        return Err(Error::Invariant(format!("r·x = {payoff} differs from F = {}", sp.value)));
    }
    if !total_direct.approx_eq(&sp.value) {
        return Err(Error::Invariant(format!(
            "direct utility {total_direct} differs from F = {}",
            sp.value
        )));
    }
    if !sp.transfer_balance().is_negligible() {
        return Err(Error::Invariant("money transfers do not balance".into()));
    }
    Ok(())
}

/// Both sides of the saddle identity at the canonical selection:
/// `(r · x, F(x), H_x)` where `H_x` is the direct utility of the assignment.
/// The three agree on success.
pub fn saddle_equality_check<T: Scalar, M: GainsModel<T> + ?Sized>(
    model: &M,
    x: &PopulationVector<T>,
) -> Result<(T, T, T)> {
    let sp = saddle_point(model, x)?;
    let h = dot(&sp.direct, &sp.x);
    Ok((dot(&sp.r, &sp.x), sp.value.clone(), h))
}

/// `H_x`, the total direct utility of an optimal assignment; equal to `F(x)`.
pub fn h_value<T: Scalar, M: GainsModel<T> + ?Sized>(model: &M, x: &PopulationVector<T>) -> Result<T> {
    Ok(saddle_equality_check(model, x)?.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Coalition, CoalitionGame, Community, CommunityGame};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pop(v: &[i64]) -> PopulationVector {
        PopulationVector::new(v.iter().map(|&a| q(a, 1)).collect()).unwrap()
    }

    #[test]
    fn battle_has_no_transfers() {
        let cg = CommunityGame::new(
            2,
            vec![
                Community::new(Coalition::singleton(0), vec![vec![q(0, 1)]]),
                Community::new(Coalition::singleton(1), vec![vec![q(0, 1)]]),
                Community::new(Coalition::grand(2), vec![vec![q(1, 1), q(1, 1)]]),
            ],
        )
        .unwrap();
        let sp = saddle_point(&cg, &pop(&[1, 1])).unwrap();
        assert_eq!(sp.r, vec![q(1, 1), q(1, 1)]);
        assert_eq!(sp.m, vec![q(0, 1), q(0, 1)]);
        let lex = saddle_point_with(&cg, &pop(&[1, 1]), SaddleSelection::LexMin).unwrap();
        assert_eq!(lex.r, vec![q(0, 1), q(2, 1)]);
    }

    #[test]
    fn glove_transfers_balance() {
        let g = CoalitionGame::new(2, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap();
        let cg = CommunityGame::from_coalition_game(&g).unwrap();
        let sp = saddle_point(&cg, &pop(&[2, 1])).unwrap();
        assert_eq!(sp.r, vec![q(0, 1), q(1, 1)]);
        assert_eq!(sp.m, vec![q(1, 4), q(-1, 2)]);
        assert_eq!(sp.transfer_balance(), q(0, 1));
        assert_eq!(sp.assignment().len(), 2);
        let (rx, f, h) = saddle_equality_check(&cg, &pop(&[3, 3])).unwrap();
        assert_eq!((rx.clone(), f.clone()), (q(3, 1), q(3, 1)));
        assert_eq!(h, f);
    }

    #[test]
    fn single_player() {
        let cg = CommunityGame::new(1, vec![Community::new(Coalition::singleton(0), vec![vec![q(3, 1)]])]).unwrap();
        let sp = saddle_point(&cg, &pop(&[1])).unwrap();
        assert_eq!(sp.r, vec![q(3, 1)]);
        assert_eq!(sp.m, vec![q(0, 1)]);
    }
}
