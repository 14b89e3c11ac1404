//! Dense two-phase primal simplex with Bland's rule.

use crate::scalar::Scalar;

use super::program::{LinearProgram, Relation, Sense, VarBound};
use super::{LpError, LpSolution, LpStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    /// Structural variable `var`, entering with coefficient sign `+1` or `-1`
    /// (free variables get both copies).
    Structural { var: usize, negative: bool },
    Slack,
    Artificial,
}

struct Tableau<T> {
    /// `m` rows of width `ncols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced costs `c_j - c_B B^-1 A_j`, last entry `-c_B B^-1 b`.
    reduced: Vec<T>,
    basis: Vec<usize>,
    columns: Vec<Column>,
    pivots: usize,
    max_pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn ncols(&self) -> usize {
        self.columns.len()
    }

    fn rhs(&self, row: usize) -> &T {
        &self.rows[row][self.ncols()]
    }

    fn price(&mut self, costs: &[T]) {
        let n = self.ncols();
        let mut reduced: Vec<T> = costs.to_vec();
        reduced.push(T::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                if !row[j].is_zero() {
                    reduced[j] = reduced[j].clone() - cb.clone() * row[j].clone();
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(LpError::PivotLimit(self.max_pivots));
        }
        let width = self.ncols() + 1;
        let inv = T::one() / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        self.rows[r][c] = T::one();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<T>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
            }
            row[c] = T::zero();
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.reduced);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        Ok(())
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// variable among ratio-test ties.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Result<bool, LpError> {
        loop {
            let entering = (0..self.ncols()).find(|&j| allowed(j) && self.reduced[j].is_pos());
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((best_row, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c)?,
            }
        }
    }
}

/// Solve by the textbook two-phase method on the standard-form tableau.
pub(crate) fn solve_tableau<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    let n = lp.num_vars();
    let m = lp.num_constraints();

    let mut columns: Vec<Column> = Vec::new();
    for (var, bound) in lp.bounds().iter().enumerate() {
        columns.push(Column::Structural { var, negative: false });
        if *bound == VarBound::Free {
            columns.push(Column::Structural { var, negative: true });
        }
    }
    let structural = columns.len();

    // Orient rows so the right-hand side is nonnegative.
    let mut negated = vec![false; m];
    let mut relations = Vec::with_capacity(m);
    for (k, c) in lp.constraints().iter().enumerate() {
        if c.rhs.is_neg() {
            negated[k] = true;
            relations.push(c.relation.flipped());
        } else {
            relations.push(c.relation);
        }
    }

    // Slack/surplus columns, then artificials. `identity[k]` is the column
    // that starts as the unit vector of row k.
    let mut slack_of = vec![None; m];
    for (k, rel) in relations.iter().enumerate() {
        if *rel != Relation::Eq {
            slack_of[k] = Some(columns.len());
            columns.push(Column::Slack);
        }
    }
    let mut identity = vec![0usize; m];
    for (k, rel) in relations.iter().enumerate() {
        match rel {
            Relation::Le => identity[k] = slack_of[k].expect("slack column"),
            Relation::Ge | Relation::Eq => {
                identity[k] = columns.len();
                columns.push(Column::Artificial);
            }
        }
    }
    let ncols = columns.len();

    let mut rows = Vec::with_capacity(m);
    for (k, c) in lp.constraints().iter().enumerate() {
        let flip = |v: &T| if negated[k] { -v.clone() } else { v.clone() };
        let mut row = vec![T::zero(); ncols + 1];
        for (j, col) in columns[..structural].iter().enumerate() {
            if let Column::Structural { var, negative } = col {
                let a = flip(&c.coeffs[*var]);
                row[j] = if *negative { -a } else { a };
            }
        }
        if let Some(s) = slack_of[k] {
            row[s] = match relations[k] {
                Relation::Le => T::one(),
                _ => -T::one(),
            };
        }
        row[identity[k]] = T::one();
        row[ncols] = flip(&c.rhs);
        rows.push(row);
    }

    let max_pivots = 50_000 + 200 * (m + ncols);
    let mut tab = Tableau {
        rows,
        reduced: Vec::new(),
        basis: identity.clone(),
        columns,
        pivots: 0,
        max_pivots,
    };

    let is_artificial = |cols: &[Column], j: usize| cols[j] == Column::Artificial;

    // Phase 1: maximize -(sum of artificials).
    if tab.columns.contains(&Column::Artificial) {
        let costs: Vec<T> = tab
            .columns
            .iter()
            .map(|c| if *c == Column::Artificial { -T::one() } else { T::zero() })
            .collect();
        tab.price(&costs);
        tab.optimize(|_| true)?;
        let phase_one_value = -tab.reduced[ncols].clone();
        if phase_one_value.is_neg() {
            return Ok(LpSolution::with_status(LpStatus::Infeasible, tab.pivots));
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if !is_artificial(&tab.columns, tab.basis[r]) {
                continue;
            }
            let replacement =
                (0..ncols).find(|&j| !is_artificial(&tab.columns, j) && !tab.rows[r][j].is_negligible());
            if let Some(c) = replacement {
                tab.pivot(r, c)?;
            }
        }
    }

    // Phase 2 on the original objective, always as a maximization.
    let sign = match lp.sense() {
        Sense::Maximize => T::one(),
        Sense::Minimize => -T::one(),
    };
    let costs: Vec<T> = tab
        .columns
        .iter()
        .map(|c| match c {
            Column::Structural { var, negative } => {
                let v = sign.clone() * lp.objective()[*var].clone();
                if *negative {
                    -v
                } else {
                    v
                }
            }
            _ => T::zero(),
        })
        .collect();
    tab.price(&costs);
    let columns = tab.columns.clone();
    let bounded = tab.optimize(|j| columns[j] != Column::Artificial)?;
    if !bounded {
        return Ok(LpSolution::with_status(LpStatus::Unbounded, tab.pivots));
    }

    let mut primal = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if let Column::Structural { var, negative } = tab.columns[b] {
            let v = tab.rhs(r).clone();
            primal[var] = if negative {
                primal[var].clone() - v
            } else {
                primal[var].clone() + v
            };
        }
    }

    // y = c_B B^-1, with B^-1 read off the columns that started as identity.
    let mut dual = Vec::with_capacity(m);
    for k in 0..m {
        let col = identity[k];
        let mut y = T::zero();
        for (r, &b) in tab.basis.iter().enumerate() {
            let a = &tab.rows[r][col];
            if !a.is_zero() && !costs[b].is_zero() {
                y = y + costs[b].clone() * a.clone();
            }
        }
        if negated[k] {
            y = -y;
        }
        dual.push(sign.clone() * y);
    }

    let objective_value = lp.objective_at(&primal);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective_value,
        basis: tab.basis,
        pivots: tab.pivots,
    })
}
