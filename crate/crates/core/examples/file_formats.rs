//! Reading and writing the text formats, and the command layer behind the binary.

use metric_magnitude::commands::{run, Command, OutputFormat, RunConfig};
use metric_magnitude::io::{parse_distance_csv, parse_edge_list, parse_points_space, write_distance_csv, write_edge_list};
use metric_magnitude::Norm;

fn main() -> metric_magnitude::Result<()> {
    let edges: Vec<(String, String, f64)> =
        [("u", "v", 1.0), ("v", "w", 2.0), ("u", "w", 2.5), ("w", "x", 1.0)].iter().map(|(a, b, l)| (a.to_string(), b.to_string(), *l)).collect();
    let text = write_edge_list(&edges);
    print!("{text}");
    let graph = parse_edge_list(&text)?;
    print!("{}", write_distance_csv(&graph));

    let far = parse_distance_csv("p,q\n0,inf\ninf,0\n")?;
    println!("points at infinite distance: {:?}", far.distance_rows());

    let cloud = parse_points_space("0,0\n1,0\n0,1\n", Norm::L1)?;
    println!("l1 triangle distances: {:?}", cloud.distance_rows());

    let dir = std::env::temp_dir().join("magnitude-formats-example");
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("graph.txt");
    std::fs::write(&input, &text)?;
    let mut cfg = RunConfig::new(Command::Function);
    cfg.inputs = vec![input];
    cfg.format = "graph".parse()?;
    cfg.grid = Some("0.5:4:8".parse()?);
    cfg.output = OutputFormat::Csv;
    print!("{}", run(&cfg)?.rendered);
    Ok(())
}
