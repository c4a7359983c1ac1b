//! Tarjan's strongly connected components, iterative so deep graphs do not
//! overflow the stack.

/// Returns `(component_of, component_count)`. Components are numbered by
/// their smallest member vertex, ascending.
pub fn tarjan(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw_comp = vec![UNSEEN; n];
    let mut ncomp = 0;
    let mut next = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    raw_comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }

    // Renumber by smallest member.
    let mut remap = vec![UNSEEN; ncomp];
    let mut fresh = 0;
    for &c in &raw_comp {
        if remap[c] == UNSEEN {
            remap[c] = fresh;
            fresh += 1;
        }
    }
    let comp = raw_comp.into_iter().map(|c| remap[c]).collect();
    (comp, ncomp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 alone
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let (comp, k) = tarjan(&adj);
        assert_eq!(k, 3);
        assert_eq!(comp, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|v| if v + 1 < n { vec![v + 1] } else { vec![0] }).collect();
        let (_, k) = tarjan(&adj);
        assert_eq!(k, 1);
    }

    #[test]
    fn empty_graph() {
        assert_eq!(tarjan(&[]), (vec![], 0));
    }
}
