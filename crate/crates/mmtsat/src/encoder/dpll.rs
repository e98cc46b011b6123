//! Tiny DPLL solver for checking small CNFs in unit tests.

pub fn solve(num_vars: u32, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    let mut assign = vec![None; num_vars as usize + 1];
    search(clauses, &mut assign).then(|| assign.iter().skip(1).map(|v| v.unwrap_or(false)).collect())
}

fn value(assign: &[Option<bool>], lit: i32) -> Option<bool> {
    assign[lit.unsigned_abs() as usize].map(|v| v == (lit > 0))
}

fn search(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for c in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open_count += 1;
                        open = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            if open_count == 0 {
                for v in trail {
                    assign[v] = None;
                }
                return false;
            }
            if open_count == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = Some(l > 0);
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = (1..assign.len()).find(|&v| assign[v].is_none()) else {
        return true;
    };
    for b in [false, true] {
        assign[v] = Some(b);
        if search(clauses, assign) {
            return true;
        }
    }
    assign[v] = None;
    for v in trail {
        assign[v] = None;
    }
    false
}
