//! Closed forms for unions, gluings, fibrations and products against direct solves.

use metric_magnitude::engine::{
    fibration_magnitude, glued_magnitude, magnitude, product_magnitude, union_magnitude,
};
use metric_magnitude::{spaces, FiniteMetricSpace, ProductMetric};

fn show(name: &str, closed: Option<f64>, direct: Option<f64>) {
    println!("{name:>10}: closed form {:.12}, direct {:.12}", closed.unwrap(), direct.unwrap());
}

fn main() -> metric_magnitude::Result<()> {
    let line = spaces::real_line(&[0.0, 1.0, 2.0, 3.0, 4.5])?;
    let r = union_magnitude(&line, &[0, 1, 2], &[2, 3, 4])?;
    show("union", r.magnitude, magnitude(&line).magnitude);

    let a = spaces::uniform(3, 1.0);
    let b = spaces::real_line(&[0.0, 0.7])?;
    let r = glued_magnitude(&a, &b, 2.0)?;
    show("glue", r.magnitude, magnitude(&a.constant_distance_glue(&b, 2.0)?).magnitude);

    let total = a.tensor_product(&b, ProductMetric::Sum);
    let pmap: Vec<usize> = (0..total.len()).map(|i| i / b.len()).collect();
    let r = fibration_magnitude(&total, &a, &pmap)?;
    show("fibration", r.magnitude, magnitude(&total).magnitude);

    let y = spaces::y_graph(0.8);
    let r = product_magnitude(&y, &b)?;
    show("product", r.magnitude, magnitude(&y.tensor_product(&b, ProductMetric::Sum)).magnitude);

    let path = FiniteMetricSpace::from_graph(&["0", "1", "2", "3"], &[("0", "1", None), ("1", "2", None), ("2", "3", None)], 1.0)?;
    println!("path graph and Y graph: {:.12} vs {:.12}", magnitude(&path).magnitude.unwrap(), magnitude(&spaces::y_graph(1.0)).magnitude.unwrap());
    Ok(())
}
