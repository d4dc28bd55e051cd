//! The axiom battery behind [`SectorContext::verify_category_axioms`].

use super::{
    Arrow, AxiomReport, AxiomRow, Battery, Prepared, SectorContext, SectorError, TensorFault,
};
use crate::cocycle::{check_cocycle, Cocycle, Intertwiner};
use crate::homotopy::RelationMode;
use crate::linalg::{c, dist, identity, op_norm, CMat};
use crate::poset::{Region, Simplex1};
use std::collections::BTreeMap;

struct Row {
    axiom: &'static str,
    tol: f64,
    residual: f64,
    cases: usize,
    witness: Option<String>,
}

impl Row {
    fn new(axiom: &'static str, tol: f64) -> Self {
        Row {
            axiom,
            tol,
            residual: 0.0,
            cases: 0,
            witness: None,
        }
    }

    fn record(&mut self, r: f64, witness: impl FnOnce() -> String) {
        let r = if r.is_nan() { f64::INFINITY } else { r };
        self.cases += 1;
        self.residual = self.residual.max(r);
        if r > self.tol && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.record(f64::INFINITY, || witness);
    }

    /// Records the residual of a fallible computation.
    fn check(&mut self, label: impl Fn() -> String, r: Result<f64, SectorError>) {
        match r {
            Ok(r) => self.record(r, &label),
            Err(e) => self.fail(format!("{}: {e}", label())),
        }
    }

    fn finish(self) -> AxiomRow {
        AxiomRow {
            axiom: self.axiom.into(),
            passed: self.witness.is_none(),
            residual: self.residual,
            cases: self.cases,
            witness: self.witness,
        }
    }
}

/// `max ‖t(∂0 b) z(b) − z1(b) t(∂1 b)‖` with the worst simplex.
fn intertwining(t: &Intertwiner, z: &Cocycle, z1: &Cocycle) -> (f64, Option<Simplex1>) {
    let mut worst = (0.0, None);
    for (b, m) in z.entries() {
        let r = match (t.get(b.d0), t.get(b.d1), z1.entries().get(b)) {
            (Some(t0), Some(t1), Some(n)) => dist(&(t0 * m), &(n * t1)),
            _ => f64::INFINITY,
        };
        if r > worst.0 || worst.1.is_none() {
            worst = (r, Some(*b));
        }
    }
    worst
}

fn distance_to_identity(t: &Intertwiner) -> f64 {
    t.entries()
        .values()
        .map(|m| dist(m, &identity(m.nrows())))
        .fold(0.0, f64::max)
}

/// How far a component is from a positive operator.
fn positivity_defect(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let skew = op_norm(&(m - &h));
    let min = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    skew + (-min).max(0.0)
}

type Cache<T> = BTreeMap<(usize, usize), Option<T>>;

pub(super) fn verify(
    ctx: &SectorContext<'_>,
    battery: &Battery,
    faults: &[TensorFault],
) -> AxiomReport {
    let tol = ctx.tol.unitary;
    let p = ctx.p;
    let d = ctx.net.d();
    let full = Region::full(p.len());
    let objects = &battery.objects;
    let n = objects.len();
    let mut rows = Vec::new();

    let mut arrows: Vec<Arrow> = battery.arrows.clone();
    arrows.extend((0..n).map(|i| Arrow {
        source: i,
        target: i,
        t: Intertwiner::identity(&full, d),
    }));
    let id_arrow = |i: usize| battery.arrows.len() + i;

    // Objects.
    let mut row = Row::new("objects", tol);
    let mut preps: Vec<Option<Prepared>> = Vec::with_capacity(n);
    for (i, z) in objects.iter().enumerate() {
        let rep = check_cocycle(z, p, Some(ctx.net), RelationMode::Generating, &ctx.tol);
        row.record(
            rep.max_unitarity_defect.max(rep.max_identity_residual),
            || format!("object {i}: {:?}", rep.failures.first()),
        );
        if !rep.passed() {
            row.fail(format!("object {i}: {:?}", rep.failures.first()));
        }
        match ctx.prepare(z) {
            Ok(zp) => preps.push(Some(zp)),
            Err(e) => {
                row.fail(format!("object {i}: {e}"));
                preps.push(None);
            }
        }
    }
    rows.push(row.finish());

    // Arrows, composition, adjoint and norm.
    let mut row = Row::new("arrows", tol);
    for (k, a) in arrows.iter().enumerate() {
        let (r, b) = intertwining(&a.t, &objects[a.source], &objects[a.target]);
        row.record(r, || format!("arrow {k} at {b:?}"));
        let loc = a.t.locality_residual(ctx.net);
        row.record(loc, || format!("arrow {k} is not local ({loc:e})"));
    }
    rows.push(row.finish());

    let (alpha, beta) = (c(0.6, -0.8), c(2.0, 0.5));
    let mut row = Row::new("composition bilinearity", tol);
    let mut sums: Vec<Intertwiner> = Vec::new();
    for (si, s) in arrows.iter().enumerate() {
        for (t1i, t1) in arrows
            .iter()
            .enumerate()
            .filter(|(_, t)| t.target == s.source)
        {
            for (t2i, t2) in arrows
                .iter()
                .enumerate()
                .filter(|(_, t)| t.source == t1.source && t.target == t1.target)
            {
                let sum = t1.t.scale(alpha).add(&t2.t.scale(beta));
                let lhs = s.t.compose(&sum);
                let rhs =
                    s.t.compose(&t1.t)
                        .scale(alpha)
                        .add(&s.t.compose(&t2.t).scale(beta));
                row.record(lhs.distance(&rhs), || {
                    format!("arrow {si} after {t1i} and {t2i}")
                });
                sums.push(sum);
            }
            for (s2i, s2) in arrows
                .iter()
                .enumerate()
                .filter(|(_, a)| a.source == s.source && a.target == s.target)
            {
                let lhs = s.t.scale(alpha).add(&s2.t.scale(beta)).compose(&t1.t);
                let rhs =
                    s.t.compose(&t1.t)
                        .scale(alpha)
                        .add(&s2.t.compose(&t1.t).scale(beta));
                row.record(lhs.distance(&rhs), || {
                    format!("arrows {si} and {s2i} after {t1i}")
                });
            }
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("adjoint", tol);
    for (k, a) in arrows.iter().enumerate() {
        let (r, b) = intertwining(&a.t.adjoint(), &objects[a.target], &objects[a.source]);
        row.record(r, || format!("adjoint of arrow {k} at {b:?}"));
        row.record(a.t.adjoint().adjoint().distance(&a.t), || {
            format!("arrow {k}")
        });
        for (j, s) in arrows
            .iter()
            .enumerate()
            .filter(|(_, s)| s.source == a.target)
        {
            let lhs = s.t.compose(&a.t).adjoint();
            let rhs = a.t.adjoint().compose(&s.t.adjoint());
            row.record(lhs.distance(&rhs), || format!("arrow {j} after {k}"));
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("C* norm", tol);
    for (k, t) in arrows.iter().map(|a| &a.t).chain(&sums).enumerate() {
        let tt = t.adjoint().compose(t);
        for (a, m) in t.entries() {
            let nt = op_norm(m);
            let r = (op_norm(&tt.entries()[a]) - nt * nt).abs() / nt.max(1.0).powi(2);
            row.record(r, || format!("arrow {k} at element {a}"));
        }
    }
    rows.push(row.finish());

    // Tensor products of objects.
    let mut row = Row::new("tensor cocycle", tol);
    let mut tens: Cache<Cocycle> = BTreeMap::new();
    let mut tprep: Cache<Prepared> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let Some(zi) = &preps[i] else {
                tens.insert((i, j), None);
                tprep.insert((i, j), None);
                continue;
            };
            let glued = match ctx.tensor_prepared(zi, &objects[j]) {
                Ok(g) => g,
                Err(e) => {
                    row.fail(format!("{i}⊗{j}: {e}"));
                    tens.insert((i, j), None);
                    tprep.insert((i, j), None);
                    continue;
                }
            };
            let mut z = glued.cocycle;
            for f in faults.iter().filter(|f| f.left == i && f.right == j) {
                if let Some(m) = z.entries_mut().get_mut(&f.simplex) {
                    *m *= f.factor;
                }
            }
            let rep = check_cocycle(&z, p, Some(ctx.net), RelationMode::Generating, &ctx.tol);
            let worst = rep.max_unitarity_defect.max(rep.max_identity_residual);
            row.record(worst, || format!("{i}⊗{j}: {:?}", rep.failures.first()));
            match ctx.prepare(&z) {
                Ok(zp) => {
                    tprep.insert((i, j), Some(zp));
                }
                Err(e) => {
                    row.fail(format!("{i}⊗{j}: {e}"));
                    tprep.insert((i, j), None);
                }
            }
            tens.insert((i, j), Some(z));
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("tensor unit", tol);
    let iota = ctx.unit();
    match ctx.prepare(&iota) {
        Ok(ip) => {
            for (j, z) in objects.iter().enumerate() {
                row.check(
                    || format!("ι⊗{j}"),
                    ctx.tensor_prepared(&ip, z)
                        .and_then(|g| Ok(g.cocycle.distance(z)?)),
                );
                if let Some(zp) = &preps[j] {
                    row.check(
                        || format!("{j}⊗ι"),
                        ctx.tensor_prepared(zp, &iota)
                            .and_then(|g| Ok(g.cocycle.distance(z)?)),
                    );
                }
            }
        }
        Err(e) => row.fail(format!("ι: {e}")),
    }
    rows.push(row.finish());

    let mut row = Row::new("tensor associativity", tol);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (Some(zi), Some(Some(ij)), Some(Some(jk))) =
                    (&preps[i], tprep.get(&(i, j)), tens.get(&(j, k)))
                else {
                    continue;
                };
                let r = ctx.tensor_prepared(ij, &objects[k]).and_then(|left| {
                    let right = ctx.tensor_prepared(zi, jk)?;
                    Ok(left.cocycle.distance(&right.cocycle)?)
                });
                row.check(|| format!("({i}⊗{j})⊗{k}"), r);
            }
        }
    }
    rows.push(row.finish());

    // Tensor products of arrows.
    let mut ta: Cache<Intertwiner> = BTreeMap::new();
    let mut row = Row::new("functoriality", tol);
    for (ti, t) in arrows.iter().enumerate() {
        for (si, s) in arrows.iter().enumerate() {
            let Some(zp) = &preps[t.source] else { continue };
            match ctx.tensor_arrows_prepared(zp, &t.t, &s.t) {
                Ok(ts) => {
                    if let (Some(Some(from)), Some(Some(to))) = (
                        tens.get(&(t.source, s.source)),
                        tens.get(&(t.target, s.target)),
                    ) {
                        let (r, b) = intertwining(&ts, from, to);
                        row.record(r, || match b {
                            Some(b) => {
                                format!("arrow {ti} ⊗ arrow {si} fails to intertwine at {b}")
                            }
                            None => format!("arrow {ti} ⊗ arrow {si}"),
                        });
                    }
                    if ti >= battery.arrows.len() && si >= battery.arrows.len() {
                        row.record(distance_to_identity(&ts), || {
                            format!("1 ⊗ 1 for objects {} and {}", t.source, s.source)
                        });
                    }
                    ta.insert((ti, si), Some(ts));
                }
                Err(e) => {
                    row.fail(format!("arrow {ti} ⊗ arrow {si}: {e}"));
                    ta.insert((ti, si), None);
                }
            }
        }
    }
    // Exchange law.
    for (ti, t) in arrows.iter().enumerate() {
        for (t2i, t2) in arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.source == t.target)
        {
            for (si, s) in arrows.iter().enumerate() {
                for (s2i, s2) in arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.source == s.target)
                {
                    let (Some(Some(first)), Some(Some(second)), Some(zp)) =
                        (ta.get(&(ti, si)), ta.get(&(t2i, s2i)), &preps[t.source])
                    else {
                        continue;
                    };
                    let lhs = second.compose(first);
                    let r = ctx
                        .tensor_arrows_prepared(zp, &t2.t.compose(&t.t), &s2.t.compose(&s.t))
                        .map(|rhs| lhs.distance(&rhs));
                    row.check(
                        || format!("exchange for arrows {t2i}·{ti} and {s2i}·{si}"),
                        r,
                    );
                }
            }
        }
    }
    rows.push(row.finish());

    // Symmetry.
    let mut eps: Cache<Intertwiner> = BTreeMap::new();
    let mut row = Row::new("symmetry intertwiner", tol);
    for i in 0..n {
        for j in 0..n {
            let (Some(zi), Some(zj)) = (&preps[i], &preps[j]) else {
                continue;
            };
            match ctx.symmetry_table_prepared(zi, zj) {
                Ok(tab) => {
                    if let (Some(Some(from)), Some(Some(to))) =
                        (tens.get(&(i, j)), tens.get(&(j, i)))
                    {
                        let (r, b) = intertwining(&tab.table, from, to);
                        row.record(r, || format!("ε({i},{j}) at {b:?}"));
                    }
                    eps.insert((i, j), Some(tab.table));
                }
                Err(e) => {
                    row.fail(format!("ε({i},{j}): {e}"));
                    eps.insert((i, j), None);
                }
            }
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("symmetry naturality", tol);
    for (ti, t) in arrows.iter().enumerate() {
        for (si, s) in arrows.iter().enumerate() {
            let found = (
                ta.get(&(ti, si)),
                ta.get(&(si, ti)),
                eps.get(&(t.target, s.target)),
                eps.get(&(t.source, s.source)),
            );
            let (Some(Some(ts)), Some(Some(st)), Some(Some(e_after)), Some(Some(e_before))) = found
            else {
                continue;
            };
            let lhs = e_after.compose(ts);
            let rhs = st.compose(e_before);
            row.record(lhs.distance(&rhs), || format!("arrows {ti} and {si}"));
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("symmetry adjoint", tol);
    let mut inv = Row::new("symmetry involution", tol);
    for i in 0..n {
        for j in 0..n {
            let (Some(Some(a)), Some(Some(b))) = (eps.get(&(i, j)), eps.get(&(j, i))) else {
                continue;
            };
            row.record(a.adjoint().distance(b), || {
                format!("ε({i},{j})* against ε({j},{i})")
            });
            inv.record(distance_to_identity(&a.compose(b)), || {
                format!("ε({i},{j})·ε({j},{i})")
            });
        }
    }
    rows.push(row.finish());

    let mut row = Row::new("symmetry hexagon", tol);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let found = (
                    &preps[i],
                    &preps[j],
                    tprep.get(&(j, k)),
                    tprep.get(&(i, j)),
                    eps.get(&(i, k)),
                    eps.get(&(i, j)),
                );
                let (
                    Some(zi),
                    Some(zj),
                    Some(Some(jk)),
                    Some(Some(ij)),
                    Some(Some(eik)),
                    Some(Some(eij)),
                ) = found
                else {
                    continue;
                };
                let one = Intertwiner::identity(&full, d);
                let r = ctx.symmetry_table_prepared(zi, jk).and_then(|lhs| {
                    let a = ctx.tensor_arrows_prepared(zj, &one, eik)?;
                    let b = ctx.tensor_arrows_prepared(ij, eij, &one)?;
                    Ok(lhs.table.distance(&a.compose(&b)))
                });
                row.check(|| format!("ε({i},{j}⊗{k})"), r);
            }
        }
    }
    rows.push(row.finish());
    rows.push(inv.finish());

    let mut row = Row::new("symmetry unit", tol);
    if let Ok(ip) = ctx.prepare(&iota) {
        for (j, zp) in preps.iter().enumerate() {
            let Some(zp) = zp else { continue };
            row.check(
                || format!("ε(ι,{j})"),
                ctx.symmetry_table_prepared(&ip, zp)
                    .map(|t| distance_to_identity(&t.table)),
            );
            row.check(
                || format!("ε({j},ι)"),
                ctx.symmetry_table_prepared(zp, &ip)
                    .map(|t| distance_to_identity(&t.table)),
            );
        }
    }
    rows.push(row.finish());

    // Left inverses.
    let mut norm_row = Row::new("left inverse normalization", tol);
    let mut land_row = Row::new("left inverse lands in arrows", tol);
    let mut row1 = Row::new("left inverse (i)", tol);
    let mut row2 = Row::new("left inverse (ii)", tol);
    let mut row3 = Row::new("left inverse positivity", tol);
    for (i, zp) in preps.iter().enumerate() {
        let Some(zp) = zp else { continue };
        let phi = |r: &Intertwiner| ctx.left_inverse_prepared(zp, r).map(|v| v.0);
        norm_row.check(
            || format!("φ^{i}(1)"),
            phi(&Intertwiner::identity(&full, d)).map(|v| distance_to_identity(&v)),
        );
        // r ∈ (z ⊗ z_j, z ⊗ z_k)
        let mut rs: Vec<(String, usize, usize, Intertwiner)> = Vec::new();
        for (ui, u) in arrows.iter().enumerate() {
            if let Some(Some(r)) = ta.get(&(id_arrow(i), ui)) {
                rs.push((format!("1⊗arrow {ui}"), u.source, u.target, r.clone()));
            }
        }
        if let Some(Some(e)) = eps.get(&(i, i)) {
            rs.push((format!("ε({i},{i})"), i, i, e.clone()));
        }
        for (label, j, k, r) in &rs {
            let phr = match phi(r) {
                Ok(v) => v,
                Err(e) => {
                    land_row.fail(format!("φ^{i}({label}): {e}"));
                    continue;
                }
            };
            let (res, b) = intertwining(&phr, &objects[*j], &objects[*k]);
            land_row.record(res, || format!("φ^{i}({label}) at {b:?}"));
            // (i): φ(1⊗t · r · 1⊗s*) = t φ(r) s*
            for (ti, t) in arrows.iter().enumerate().filter(|(_, a)| a.source == *k) {
                for (si, s) in arrows.iter().enumerate().filter(|(_, a)| a.source == *j) {
                    let (Some(Some(one_t)), Some(Some(one_s))) =
                        (ta.get(&(id_arrow(i), ti)), ta.get(&(id_arrow(i), si)))
                    else {
                        continue;
                    };
                    let x = one_t.compose(r).compose(&one_s.adjoint());
                    let rhs = t.t.compose(&phr).compose(&s.t.adjoint());
                    row1.check(
                        || format!("φ^{i} with {label}, arrows {ti} and {si}"),
                        phi(&x).map(|v| v.distance(&rhs)),
                    );
                }
            }
            // (ii): φ(r ⊗ 1_m) = φ(r) ⊗ 1_m
            for (m, _) in objects.iter().enumerate() {
                let (Some(Some(ij)), Some(zj)) = (tprep.get(&(i, *j)), &preps[*j]) else {
                    continue;
                };
                let one = Intertwiner::identity(&full, d);
                let res = ctx.tensor_arrows_prepared(ij, r, &one).and_then(|rm| {
                    let lhs = phi(&rm)?;
                    let rhs = ctx.tensor_arrows_prepared(zj, &phr, &one)?;
                    Ok(lhs.distance(&rhs))
                });
                row2.check(|| format!("φ^{i}({label} ⊗ 1_{m})"), res);
            }
            // (iii): φ(r* r) ≥ 0
            let rr = r.adjoint().compose(r);
            row3.check(
                || format!("φ^{i}({label}* {label})"),
                phi(&rr).map(|v| {
                    v.entries()
                        .values()
                        .map(positivity_defect)
                        .fold(0.0, f64::max)
                }),
            );
        }
    }
    rows.extend([
        norm_row.finish(),
        land_row.finish(),
        row1.finish(),
        row2.finish(),
        row3.finish(),
    ]);

    // Conjugates of the simple objects.
    let mut row = Row::new("conjugate equations", tol);
    let mut chi_row = Row::new("statistical phase lemma", tol);
    for (i, zp) in preps.iter().enumerate() {
        let Some(zp) = zp else { continue };
        if ctx.require_simple(zp).is_err() {
            continue;
        }
        let r = conjugate_equations(ctx, zp);
        row.check(|| format!("object {i}"), r);
        chi_row.check(
            || format!("object {i}"),
            ctx.lemma_chi(&objects[i])
                .map(|l| l.residual_d0.max(l.residual_d1)),
        );
    }
    rows.push(row.finish());
    rows.push(chi_row.finish());

    AxiomReport { rows }
}

/// `z ⊗ z̄ = z̄ ⊗ z = ι` entrywise, `r = r̄ = 1` intertwine, and both
/// conjugate equations.
fn conjugate_equations(ctx: &SectorContext<'_>, zp: &Prepared) -> Result<f64, SectorError> {
    let full = Region::full(ctx.p.len());
    let d = zp.z.d();
    let one = Intertwiner::identity(&full, d);
    let zbar = ctx.conjugate_prepared(zp)?;
    let bp = ctx.prepare(&zbar)?;
    let zzbar = ctx.tensor_prepared(zp, &zbar)?.cocycle;
    let zbarz = ctx.tensor_prepared(&bp, &zp.z)?.cocycle;
    let iota = ctx.unit();
    let mut worst = zzbar.distance(&iota)?.max(zbarz.distance(&iota)?);
    worst = worst
        .max(intertwining(&one, &iota, &zbarz).0)
        .max(intertwining(&one, &iota, &zzbar).0);
    let zzbar_p = ctx.prepare(&zzbar)?;
    let zbarz_p = ctx.prepare(&zbarz)?;
    // r̄* ⊗ 1_z · 1_z ⊗ r = 1_z
    let first = ctx
        .tensor_arrows_prepared(&zzbar_p, &one.adjoint(), &one)?
        .compose(&ctx.tensor_arrows_prepared(zp, &one, &one)?);
    // r* ⊗ 1_z̄ · 1_z̄ ⊗ r̄ = 1_z̄
    let second = ctx
        .tensor_arrows_prepared(&zbarz_p, &one.adjoint(), &one)?
        .compose(&ctx.tensor_arrows_prepared(&bp, &one, &one)?);
    Ok(worst
        .max(distance_to_identity(&first))
        .max(distance_to_identity(&second)))
}
