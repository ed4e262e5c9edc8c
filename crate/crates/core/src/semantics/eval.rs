//! Exact search for team satisfaction.
//!
//! Every shortcut here is an equivalence, not a heuristic: flatness for
//! first-order nodes, maximal satisfying subteams for union-closed nodes in
//! the lax reading, and pruning by [`Eval::necessary`], which only rejects
//! partial teams that no satisfying team can contain.

use alloc::vec;
use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use crate::model::{all_tuples, Elem};

use super::program::{Block, CTerm, Kind, Program, Row};
use super::Mode;

const MEMO_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exceeded;

type Res<T> = Result<T, Exceeded>;

pub(crate) struct Eval<'p, 'm> {
    p: &'p Program<'m>,
    mode: Mode,
    max: u64,
    pub used: u64,
    memo: HashMap<(usize, Vec<Row>), bool>,
    max_memo: HashMap<(usize, Vec<Row>), Vec<Row>>,
}

fn canon(mut rows: Vec<Row>) -> Vec<Row> {
    rows.sort_unstable();
    rows.dedup();
    rows
}

fn with_value(r: &[Elem], col: usize, m: Elem) -> Row {
    let mut r = r.to_vec();
    if col == r.len() {
        r.push(m);
    } else {
        r[col] = m;
    }
    r
}

impl<'p, 'm> Eval<'p, 'm> {
    pub fn new(p: &'p Program<'m>, mode: Mode, max: u64) -> Self {
        Eval { p, mode, max, used: 0, memo: HashMap::new(), max_memo: HashMap::new() }
    }

    fn tick(&mut self) -> Res<()> {
        self.used += 1;
        if self.used > self.max {
            Err(Exceeded)
        } else {
            Ok(())
        }
    }

    fn n(&self) -> Elem {
        self.p.n as Elem
    }

    fn extend_all(&self, rows: &[Row], col: usize) -> Vec<Row> {
        let n = self.n();
        canon(rows.iter().flat_map(|r| (0..n).map(move |m| with_value(r, col, m))).collect())
    }

    fn all_hold(&self, id: usize, rows: &[Row]) -> bool {
        rows.iter().all(|r| self.p.holds(id, &mut r.clone()))
    }

    pub fn sat(&mut self, id: usize, rows: &[Row]) -> Res<bool> {
        if rows.is_empty() {
            return Ok(true);
        }
        self.tick()?;
        let node = &self.p.nodes[id];
        if node.fo {
            return Ok(self.all_hold(id, rows));
        }
        if self.mode == Mode::Lax && node.uc {
            return Ok(self.maxsub(id, rows)?.len() == rows.len());
        }
        let key = (id, rows.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = match &node.kind {
            Kind::Lit { .. } => unreachable!(),
            Kind::Dep(ts) => self.dep(ts, rows),
            Kind::Indep(a, b, c) => self.indep(a, b, c, rows),
            Kind::Incl(a, b) => self.incl(a, b, rows),
            Kind::Excl(a, b) => self.excl(a, b, rows),
            Kind::Equi(a, b) => self.incl(a, b, rows) && self.incl(b, a, rows),
            Kind::And(cs) => {
                let mut ok = true;
                for &c in cs {
                    if !self.sat(c, rows)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            Kind::Or(ds) => match self.mode {
                Mode::Lax => self.or_lax(ds, rows)?,
                Mode::Strict => self.or_strict(ds, rows)?,
            },
            Kind::Forall { col, body } => {
                let ext = self.extend_all(rows, *col);
                self.sat(*body, &ext)?
            }
            Kind::Exists { col, body, block } => match block {
                Some(b) => self.keyed(b, node.width, rows)?,
                None => self.exists(*col, *body, rows)?,
            },
        };
        if self.memo.len() > MEMO_LIMIT {
            self.memo.clear();
        }
        self.memo.insert(key, v);
        Ok(v)
    }

    // ---- atoms ----

    pub fn dep(&self, ts: &[CTerm], rows: &[Row]) -> bool {
        let (last, key) = ts.split_last().expect("nonempty dep");
        let mut seen: HashMap<Row, Elem> = HashMap::new();
        rows.iter().all(|r| {
            let v = self.p.term(last, r);
            *seen.entry(self.p.tuple(key, r)).or_insert(v) == v
        })
    }

    pub fn indep(&self, a: &[CTerm], b: &[CTerm], c: &[CTerm], rows: &[Row]) -> bool {
        let vals: Vec<(Row, Row, Row)> =
            rows.iter().map(|r| (self.p.tuple(a, r), self.p.tuple(b, r), self.p.tuple(c, r))).collect();
        let set: HashSet<&(Row, Row, Row)> = vals.iter().collect();
        vals.iter().all(|(a1, b1, _)| {
            vals.iter().filter(|(a2, _, _)| a2 == a1).all(|(_, _, c2)| {
                let probe = (a1.clone(), b1.clone(), c2.clone());
                set.contains(&probe)
            })
        })
    }

    pub fn incl(&self, a: &[CTerm], b: &[CTerm], rows: &[Row]) -> bool {
        let targets: HashSet<Row> = rows.iter().map(|r| self.p.tuple(b, r)).collect();
        rows.iter().all(|r| targets.contains(&self.p.tuple(a, r)))
    }

    pub fn excl(&self, a: &[CTerm], b: &[CTerm], rows: &[Row]) -> bool {
        let lhs: HashSet<Row> = rows.iter().map(|r| self.p.tuple(a, r)).collect();
        rows.iter().all(|r| !lhs.contains(&self.p.tuple(b, r)))
    }

    // ---- union-closed nodes (lax only) ----

    /// The largest subteam of `rows` satisfying the union-closed node `id`.
    fn maxsub(&mut self, id: usize, rows: &[Row]) -> Res<Vec<Row>> {
        if rows.is_empty() {
            return Ok(Vec::new());
        }
        self.tick()?;
        let node = &self.p.nodes[id];
        if node.fo {
            return Ok(rows.iter().filter(|r| self.p.holds(id, &mut (*r).clone())).cloned().collect());
        }
        let key = (id, rows.to_vec());
        if let Some(v) = self.max_memo.get(&key) {
            return Ok(v.clone());
        }
        let out = match &node.kind {
            Kind::Incl(a, b) => self.incl_fixpoint(&[(a, b)], rows),
            Kind::Equi(a, b) => self.incl_fixpoint(&[(a, b), (b, a)], rows),
            Kind::And(cs) => {
                let mut cur = rows.to_vec();
                loop {
                    let before = cur.len();
                    for &c in cs {
                        cur = self.maxsub(c, &cur)?;
                    }
                    if cur.len() == before || cur.is_empty() {
                        break cur;
                    }
                }
            }
            Kind::Or(ds) => {
                let mut all = Vec::new();
                for &d in ds {
                    all.extend(self.maxsub(d, rows)?);
                }
                canon(all)
            }
            Kind::Exists { col, body, .. } => {
                let ext = self.extend_all(rows, *col);
                let w = self.maxsub(*body, &ext)?;
                let n = self.n();
                rows.iter()
                    .filter(|r| (0..n).any(|m| w.binary_search(&with_value(r, *col, m)).is_ok()))
                    .cloned()
                    .collect()
            }
            Kind::Forall { col, body } => {
                let mut cur = rows.to_vec();
                let n = self.n();
                loop {
                    let ext = self.extend_all(&cur, *col);
                    let w = self.maxsub(*body, &ext)?;
                    let next: Vec<Row> = cur
                        .iter()
                        .filter(|r| (0..n).all(|m| w.binary_search(&with_value(r, *col, m)).is_ok()))
                        .cloned()
                        .collect();
                    if next.len() == cur.len() {
                        break cur;
                    }
                    cur = next;
                }
            }
            _ => unreachable!("maxsub on a node that is not union closed"),
        };
        if self.max_memo.len() > MEMO_LIMIT {
            self.max_memo.clear();
        }
        self.max_memo.insert(key, out.clone());
        Ok(out)
    }

    fn incl_fixpoint(&self, pairs: &[(&Vec<CTerm>, &Vec<CTerm>)], rows: &[Row]) -> Vec<Row> {
        let mut cur = rows.to_vec();
        loop {
            let before = cur.len();
            for (a, b) in pairs {
                let targets: HashSet<Row> = cur.iter().map(|r| self.p.tuple(b, r)).collect();
                cur.retain(|r| targets.contains(&self.p.tuple(a, r)));
            }
            if cur.len() == before {
                return cur;
            }
        }
    }

    // ---- pruning ----

    /// False only if no team satisfying `id` contains `rows`.
    pub fn necessary(&mut self, id: usize, rows: &[Row]) -> Res<bool> {
        if rows.is_empty() {
            return Ok(true);
        }
        let node = &self.p.nodes[id];
        if node.fo {
            return Ok(self.all_hold(id, rows));
        }
        if node.dc {
            return self.sat(id, rows);
        }
        match &node.kind {
            Kind::And(cs) => {
                for &c in cs {
                    if !self.necessary(c, rows)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Kind::Or(ds) => {
                let mut forced: Vec<Vec<Row>> = vec![Vec::new(); ds.len()];
                for r in rows {
                    let mut scratch = r.clone();
                    let el: Vec<usize> = (0..ds.len()).filter(|&j| self.p.eligible(ds[j], &mut scratch)).collect();
                    match el.as_slice() {
                        [] => return Ok(false),
                        [j] => forced[*j].push(r.clone()),
                        _ => {}
                    }
                }
                for (j, f) in forced.iter().enumerate() {
                    if !f.is_empty() && !self.necessary(ds[j], f)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Kind::Forall { col, body } => {
                let ext = self.extend_all(rows, *col);
                self.necessary(*body, &ext)
            }
            Kind::Exists { col, body, .. } => {
                let n = self.n();
                for r in rows {
                    let mut any = false;
                    for m in 0..n {
                        if self.necessary(*body, &[with_value(r, *col, m)])? {
                            any = true;
                            break;
                        }
                    }
                    if !any {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(true),
        }
    }

    // ---- disjunction ----

    fn eligibility(&self, ds: &[usize], rows: &[Row]) -> Vec<Vec<bool>> {
        rows.iter()
            .map(|r| {
                let mut scratch = r.clone();
                ds.iter().map(|&d| self.p.eligible(d, &mut scratch)).collect()
            })
            .collect()
    }

    fn or_lax(&mut self, ds: &[usize], rows: &[Row]) -> Res<bool> {
        let elig = self.eligibility(ds, rows);
        if elig.iter().any(|e| !e.contains(&true)) {
            return Ok(false);
        }
        let mut covered = vec![false; rows.len()];
        let mut general = Vec::new();
        for (j, &d) in ds.iter().enumerate() {
            let node = &self.p.nodes[d];
            let mine: Vec<Row> = (0..rows.len()).filter(|&i| elig[i][j]).map(|i| rows[i].clone()).collect();
            if node.fo {
                (0..rows.len()).filter(|&i| elig[i][j]).for_each(|i| covered[i] = true);
            } else if node.uc {
                for r in self.maxsub(d, &mine)? {
                    let i = rows.binary_search(&r).expect("subteam row");
                    covered[i] = true;
                }
            } else {
                general.push(j);
            }
        }
        let mut pending: Vec<usize> = (0..rows.len()).filter(|&i| !covered[i]).collect();
        if pending.is_empty() {
            return Ok(true);
        }
        if general.is_empty() {
            return Ok(false);
        }
        // A row covered by several disjuncts can be given to one of them and
        // offered to the others as an optional extra, so singleton choices
        // suffice.
        let options: Vec<Vec<usize>> =
            (0..rows.len()).map(|i| general.iter().copied().filter(|&j| elig[i][j]).collect()).collect();
        if pending.iter().any(|&i| options[i].is_empty()) {
            return Ok(false);
        }
        pending.sort_by_key(|&i| options[i].len());
        let mut assigned: Vec<Vec<Row>> = vec![Vec::new(); ds.len()];
        let mut leaf_memo: HashMap<(usize, Vec<Row>), bool> = HashMap::new();
        self.or_lax_dfs(ds, rows, &elig, &pending, &options, 0, &mut assigned, &mut leaf_memo)
    }

    #[allow(clippy::too_many_arguments)]
    fn or_lax_dfs(
        &mut self,
        ds: &[usize],
        rows: &[Row],
        elig: &[Vec<bool>],
        pending: &[usize],
        options: &[Vec<usize>],
        pos: usize,
        assigned: &mut Vec<Vec<Row>>,
        leaf_memo: &mut HashMap<(usize, Vec<Row>), bool>,
    ) -> Res<bool> {
        self.tick()?;
        if pos == pending.len() {
            for j in 0..ds.len() {
                if assigned[j].is_empty() {
                    continue;
                }
                let a = canon(assigned[j].clone());
                let key = (j, a.clone());
                let ok = match leaf_memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = if self.p.nodes[ds[j]].dc {
                            self.sat(ds[j], &a)?
                        } else {
                            let extra: Vec<Row> = (0..rows.len())
                                .filter(|&i| elig[i][j] && a.binary_search(&rows[i]).is_err())
                                .map(|i| rows[i].clone())
                                .collect();
                            self.with_extras(ds[j], &a, &extra, 0, &mut Vec::new())?
                        };
                        leaf_memo.insert(key, v);
                        v
                    }
                };
                if !ok {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let i = pending[pos];
        for &j in &options[i] {
            assigned[j].push(rows[i].clone());
            let a = canon(assigned[j].clone());
            let ok = self.necessary(ds[j], &a)?
                && self.or_lax_dfs(ds, rows, elig, pending, options, pos + 1, assigned, leaf_memo)?;
            assigned[j].pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Is there a set of extra rows whose union with `base` satisfies `id`?
    fn with_extras(&mut self, id: usize, base: &[Row], extra: &[Row], k: usize, chosen: &mut Vec<Row>) -> Res<bool> {
        self.tick()?;
        let team = canon(base.iter().chain(chosen.iter()).cloned().collect());
        if k == extra.len() {
            return self.sat(id, &team);
        }
        if !self.necessary(id, &team)? {
            return Ok(false);
        }
        if self.with_extras(id, base, extra, k + 1, chosen)? {
            return Ok(true);
        }
        chosen.push(extra[k].clone());
        let r = self.with_extras(id, base, extra, k + 1, chosen);
        chosen.pop();
        r
    }

    fn or_strict(&mut self, ds: &[usize], rows: &[Row]) -> Res<bool> {
        let elig = self.eligibility(ds, rows);
        if elig.iter().any(|e| !e.contains(&true)) {
            return Ok(false);
        }
        let nodes = &self.p.nodes;
        let fo: Vec<bool> = ds.iter().map(|&d| nodes[d].fo).collect();
        let rest_dc = ds.iter().all(|&d| nodes[d].fo || nodes[d].dc);
        let mut pending = Vec::new();
        let mut options: Vec<Vec<usize>> = Vec::with_capacity(rows.len());
        for (i, e) in elig.iter().enumerate() {
            let mut opts: Vec<usize> = (0..ds.len()).filter(|&j| e[j]).collect();
            if rest_dc && opts.iter().any(|&j| fo[j]) {
                // A row a first-order disjunct accepts can be moved there:
                // the other sides are downward closed.
                opts.clear();
            } else {
                opts.sort_by_key(|&j| !fo[j]);
                pending.push(i);
            }
            options.push(opts);
        }
        pending.sort_by_key(|&i| options[i].len());
        let mut assigned: Vec<Vec<Row>> = vec![Vec::new(); ds.len()];
        self.or_strict_dfs(ds, rows, &fo, &pending, &options, 0, &mut assigned)
    }

    #[allow(clippy::too_many_arguments)]
    fn or_strict_dfs(
        &mut self,
        ds: &[usize],
        rows: &[Row],
        fo: &[bool],
        pending: &[usize],
        options: &[Vec<usize>],
        pos: usize,
        assigned: &mut Vec<Vec<Row>>,
    ) -> Res<bool> {
        self.tick()?;
        if pos == pending.len() {
            for j in 0..ds.len() {
                if !fo[j] && !assigned[j].is_empty() {
                    let a = canon(assigned[j].clone());
                    if !self.sat(ds[j], &a)? {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        let i = pending[pos];
        for &j in &options[i] {
            assigned[j].push(rows[i].clone());
            let ok = fo[j] || {
                let a = canon(assigned[j].clone());
                self.necessary(ds[j], &a)?
            };
            let ok = ok && self.or_strict_dfs(ds, rows, fo, pending, options, pos + 1, assigned)?;
            assigned[j].pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // ---- existential quantification ----

    fn exists(&mut self, col: usize, body: usize, rows: &[Row]) -> Res<bool> {
        let n = self.n();
        let singles = self.mode == Mode::Strict || self.p.nodes[body].dc;
        // Values that can appear with each row at all.
        let mut cands: Vec<Vec<Elem>> = Vec::with_capacity(rows.len());
        for r in rows {
            let mut c = Vec::new();
            for m in 0..n {
                if self.necessary(body, &[with_value(r, col, m)])? {
                    c.push(m);
                }
            }
            if c.is_empty() {
                return Ok(false);
            }
            cands.push(c);
        }
        let options: Vec<Vec<Vec<Elem>>> = cands
            .iter()
            .map(|c| {
                if singles {
                    c.iter().map(|&m| vec![m]).collect()
                } else {
                    let mut subsets: Vec<Vec<Elem>> = (1u32..(1 << c.len()))
                        .map(|mask| c.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &m)| m).collect())
                        .collect();
                    subsets.sort_by_key(|s: &Vec<Elem>| s.len());
                    subsets
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| options[i].len());
        let mut partial = Vec::new();
        self.exists_dfs(col, body, rows, &order, &options, 0, &mut partial)
    }

    #[allow(clippy::too_many_arguments)]
    fn exists_dfs(
        &mut self,
        col: usize,
        body: usize,
        rows: &[Row],
        order: &[usize],
        options: &[Vec<Vec<Elem>>],
        pos: usize,
        partial: &mut Vec<Row>,
    ) -> Res<bool> {
        self.tick()?;
        if pos == order.len() {
            let team = canon(partial.clone());
            return self.sat(body, &team);
        }
        let i = order[pos];
        for vals in &options[i] {
            let len = partial.len();
            partial.extend(vals.iter().map(|&m| with_value(&rows[i], col, m)));
            let ok = pos + 1 == order.len() || {
                let team = canon(partial.clone());
                self.necessary(body, &team)?
            };
            let ok = ok && self.exists_dfs(col, body, rows, order, options, pos + 1, partial)?;
            partial.truncate(len);
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Search over one value tuple per key class, up to indistinguishability
    /// by the block's literals.
    fn keyed(&mut self, b: &Block, width: usize, rows: &[Row]) -> Res<bool> {
        let mut classes: Vec<(Row, Vec<usize>)> = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let k = self.p.tuple(&b.key, r);
            match classes.iter_mut().find(|(key, _)| *key == k) {
                Some((_, members)) => members.push(i),
                None => classes.push((k, vec![i])),
            }
        }
        let glue = |r: &Row, t: &[Elem]| {
            let mut out = r.clone();
            out.extend_from_slice(t);
            debug_assert_eq!(out.len(), width + t.len());
            out
        };
        let mut reps: Vec<Vec<Vec<Elem>>> = Vec::with_capacity(classes.len());
        for (_, members) in &classes {
            let mut seen: HashSet<Vec<bool>> = HashSet::new();
            let mut mine = Vec::new();
            for t in all_tuples(self.p.n, b.arity) {
                self.tick()?;
                let ext: Vec<Row> = members.iter().map(|&i| glue(&rows[i], &t)).collect();
                let prog = self.p;
                let profile: Vec<bool> = ext
                    .iter()
                    .flat_map(|r| {
                        b.lits.iter().map(move |&l| match &prog.nodes[l].kind {
                            Kind::Lit { positive, atom } => prog.lit(*positive, atom, r),
                            _ => unreachable!(),
                        })
                    })
                    .collect();
                if seen.insert(profile) && self.necessary(b.body, &canon(ext))? {
                    mine.push(t);
                }
            }
            if mine.is_empty() {
                return Ok(false);
            }
            reps.push(mine);
        }
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&c| reps[c].len());
        let mut partial = Vec::new();
        self.keyed_dfs(b, rows, &classes, &reps, &order, 0, &mut partial, &glue)
    }

    #[allow(clippy::too_many_arguments)]
    fn keyed_dfs(
        &mut self,
        b: &Block,
        rows: &[Row],
        classes: &[(Row, Vec<usize>)],
        reps: &[Vec<Vec<Elem>>],
        order: &[usize],
        pos: usize,
        partial: &mut Vec<Row>,
        glue: &dyn Fn(&Row, &[Elem]) -> Row,
    ) -> Res<bool> {
        self.tick()?;
        if pos == order.len() {
            let team = canon(partial.clone());
            return self.sat(b.body, &team);
        }
        let c = order[pos];
        for t in &reps[c] {
            let len = partial.len();
            partial.extend(classes[c].1.iter().map(|&i| glue(&rows[i], t)));
            let ok = pos + 1 == order.len() || {
                let team = canon(partial.clone());
                self.necessary(b.body, &team)?
            };
            let ok = ok && self.keyed_dfs(b, rows, classes, reps, order, pos + 1, partial, glue)?;
            partial.truncate(len);
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
