use mckay_core::oracle::Hull;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Rat = BigRational;

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[Rat], b: &[Rat]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vertices of a 2-face in boundary order, counter-clockwise seen from outside.
fn cycle(hull: &Hull, facet: usize) -> Vec<usize> {
    let f = &hull.facets[facet];
    let edges: Vec<(usize, usize)> = hull
        .faces
        .iter()
        .filter(|e| e.dim == 1 && e.vertices.len() == 2)
        .filter(|e| e.vertices.iter().all(|v| f.vertices.contains(v)))
        .map(|e| (e.vertices[0], e.vertices[1]))
        .collect();
    let mut order = vec![f.vertices[0]];
    while order.len() < f.vertices.len() {
        let last = *order.last().expect("non-empty");
        let next = edges
            .iter()
            .filter_map(|&(a, b)| match (a == last, b == last) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .find(|v| !order.contains(v));
        match next {
            Some(v) => order.push(v),
            None => break,
        }
    }
    if order.len() >= 3 {
        let p = |i: usize| &hull.vertices[order[i]];
        let n = cross(&sub(p(1), p(0)), &sub(p(2), p(0)));
        // Facet normals point inward.
        if dot(&n, &f.normal).is_positive() {
            order.reverse();
        }
    }
    order
}

fn decimal(x: &Rat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}", x.to_f64().unwrap_or(f64::NAN))
    }
}

/// OFF mesh of a three-dimensional `C_ζ` cut off by `Σ xᵢ ≤ max + 1` over its vertices.
pub fn render(hull: &Hull) -> String {
    let top = hull
        .vertices
        .iter()
        .map(|v| v.iter().sum::<Rat>())
        .max()
        .unwrap_or_else(Rat::zero);
    let cut = hull.truncated(&(top + Rat::one()));
    let faces: Vec<Vec<usize>> = (0..cut.facets.len()).map(|i| cycle(&cut, i)).collect();
    let edges = cut.faces.iter().filter(|f| f.dim == 1).count();
    let mut s = format!("OFF\n{} {} {}\n", cut.vertices.len(), faces.len(), edges);
    for v in &cut.vertices {
        s.push_str(&v.iter().map(decimal).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    for f in &faces {
        s.push_str(&f.len().to_string());
        for v in f {
            s.push_str(&format!(" {v}"));
        }
        s.push('\n');
    }
    s
}
