use std::path::Path;

use entropy_core::rng::{derive_seed, in_box, seeded};
use entropy_core::{Body, OracleTolerance, Vector};
use entropy_lab::bodies::{BodySpec, parse_body, to_json};

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn bodies() -> Vec<Body> {
    let sq = Body::vpolytope(&[v(&[1.0, 1.0]), v(&[1.0, -1.0])]).unwrap();
    let hex = Body::vpolytope(&[v(&[2.0, 0.0]), v(&[1.0, 1.5]), v(&[-1.0, 1.5])]).unwrap();
    let e = Body::ellipsoid(&[3.0, 0.5]).unwrap();
    vec![
        Body::ball(3, 1.5).unwrap(),
        e.clone(),
        sq.clone(),
        Body::polar(hex.clone()),
        Body::intersect(vec![e.clone(), sq.scaled(2.0).unwrap()]).unwrap(),
        Body::minkowski(vec![sq.clone(), Body::unit_ball(2)]).unwrap(),
        Body::scale(0.5, Body::polar(Body::intersect_ball(&e, 2.0).unwrap())).unwrap(),
        Body::interval(4.0).unwrap(),
    ]
}

#[test]
fn emitted_bodies_reload_to_the_same_oracle() {
    let tol = OracleTolerance::default();
    for (i, body) in bodies().into_iter().enumerate() {
        let text = to_json(&body);
        let (spec, again) = parse_body(Path::new("emitted.json"), &text).unwrap();
        assert_eq!(spec, BodySpec::from_body(&again), "body {i}");
        assert_eq!(again.dim(), body.dim());
        let r = 1.3 * body.circumradius_bound();
        let mut rng = seeded(derive_seed(21, i as u64));
        let mut compared = 0;
        for _ in 0..300 {
            let x = in_box(&mut rng, &vec![r; body.dim()]);
            // Points on the boundary may fall either way within tolerance.
            let g = body.gauge(&x, &tol).unwrap();
            if (g - 1.0).abs() < 1e-6 {
                continue;
            }
            assert_eq!(
                body.contains(&x, &tol).unwrap(),
                again.contains(&x, &tol).unwrap(),
                "body {i} at {x:?}"
            );
            compared += 1;
        }
        assert!(compared > 250);
    }
}

#[test]
fn spec_schema_parses() {
    let text = r#"{"type": "polar", "of": {"type": "intersect", "parts": [
        {"type": "scale", "factor": 2.5, "of": {"type": "vpolytope", "vertices": [[1, 0.5], [0.2, 1]]}},
        {"type": "minkowski", "parts": [{"type": "ball", "radius": 1}, {"type": "ellipsoid", "semiaxes": [1, 0.25]}]}
    ]}}"#;
    let (_, body) = parse_body(Path::new("nested.json"), text).unwrap();
    assert_eq!(body.dim(), 2);
    let (_, again) = parse_body(Path::new("re.json"), &to_json(&body)).unwrap();
    assert_eq!(BodySpec::from_body(&body), BodySpec::from_body(&again));
}

#[test]
fn flat_hull_is_rejected_with_its_path() {
    let text = r#"{"type": "scale", "factor": 2, "of": {"type": "vpolytope", "vertices": [[1, 0], [2, 0]]}}"#;
    let err = parse_body(Path::new("flat.json"), text).unwrap_err();
    assert!(err.to_string().contains("`of`"), "{err}");
}
