//! Overlapping two digits on one canvas. Pass IDX image and label files to use
//! real MNIST; without them two synthetic strokes are composed.
//!
//! cargo run --example multi_mnist -- [images.idx labels.idx]

use std::path::Path;

use sepnet::data::{compose_multi_overlap, load_mnist_idx, CANVAS_SIDE};

fn render(canvas: &[f64]) {
    for row in canvas.chunks(CANVAS_SIDE) {
        let line: String = row.iter().map(|&v| if v > 0.66 { '#' } else if v > 0.2 { '+' } else { '.' }).collect();
        println!("{line}");
    }
}

fn synthetic(vertical: bool) -> Vec<u8> {
    (0..28 * 28)
        .map(|i| {
            let (r, c) = (i / 28, i % 28);
            let on = if vertical { (12..16).contains(&c) && (4..24).contains(&r) } else { (12..16).contains(&r) && (4..24).contains(&c) };
            if on { 255 } else { 0 }
        })
        .collect()
}

fn main() -> sepnet::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let (a, b) = if let (Some(images), Some(labels)) = (args.get(1), args.get(2)) {
        let set = load_mnist_idx(Path::new(images), Path::new(labels))?;
        println!("{} images of {}x{}", set.images.len(), set.rows, set.cols);
        ((set.images[0].clone(), set.labels[0]), (set.images[1].clone(), set.labels[1]))
    } else {
        ((synthetic(true), 1), (synthetic(false), 7))
    };
    let (canvas, labels) = compose_multi_overlap((&a.0, a.1), (&b.0, b.1))?;
    println!("labels (top-left, bottom-right) = {labels:?}");
    render(&canvas);
    Ok(())
}
