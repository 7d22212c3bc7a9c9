//! SVG drawing of a 2-dimensional element: domain pattern on the left,
//! range pattern on the right, each piece labelled by its number.
//!
//! Coordinates are written as exact decimals, so the output is a pure
//! function of the element.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dyadic::{Dyadic, Rectangle};
use crate::nv::Element;

const SIDE: u32 = 400;
const MARGIN: u32 = 20;
const GAP: u32 = 80;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("only 2-dimensional elements can be drawn (got dimension {0})")]
pub struct RenderError(pub usize);

fn scaled(x: &Dyadic, k: u32) -> Dyadic {
    Dyadic::new(x.numerator() * k, x.exponent())
}

fn offset(x: Dyadic, k: u32) -> Dyadic {
    &x + &Dyadic::new(k, 0)
}

struct Frame {
    left: u32,
}

impl Frame {
    /// `(x, y, width, height)` in SVG user units; the second axis points up.
    fn place(&self, r: &Rectangle) -> [Dyadic; 4] {
        let (ax, ay) = (r.axis(0), r.axis(1));
        let x = offset(scaled(&ax.lo(), SIDE), self.left);
        let top = Dyadic::one().checked_sub(&ay.hi()).expect("hi <= 1");
        let y = offset(scaled(&top, SIDE), MARGIN);
        [x, y, scaled(&ax.length(), SIDE), scaled(&ay.length(), SIDE)]
    }

    fn draw(&self, out: &mut String, rects: &[Rectangle]) {
        let side = SIDE;
        writeln!(
            out,
            r#"  <rect class="frame" x="{}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="black" stroke-width="2"/>"#,
            self.left
        )
        .unwrap();
        for (i, r) in rects.iter().enumerate() {
            let [x, y, w, h] = self.place(r);
            writeln!(
                out,
                r#"  <rect class="piece" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
                x.to_decimal(),
                y.to_decimal(),
                w.to_decimal(),
                h.to_decimal()
            )
            .unwrap();
            let cx = &x + &w.scaled(-1);
            let cy = &y + &h.scaled(-1);
            let font = w
                .clone()
                .min(h.clone())
                .scaled(-1)
                .min(Dyadic::new(24u32, 0));
            writeln!(
                out,
                r#"  <text class="label" x="{}" y="{}" font-size="{}" text-anchor="middle" dominant-baseline="central">{i}</text>"#,
                cx.to_decimal(),
                cy.to_decimal(),
                font.to_decimal()
            )
            .unwrap();
        }
    }
}

/// Renders `e` as an SVG 1.1 document.
pub fn render_element(e: &Element) -> Result<String, RenderError> {
    if e.dim() != 2 {
        return Err(RenderError(e.dim()));
    }
    let width = 2 * SIDE + 2 * MARGIN + GAP;
    let height = SIDE + 2 * MARGIN;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    Frame { left: MARGIN }.draw(&mut out, &e.domain_pattern());
    let mid = height / 2;
    let (a, b) = (MARGIN + SIDE + GAP / 4, MARGIN + SIDE + 3 * GAP / 4);
    writeln!(
        out,
        r#"  <path class="arrow" d="M {a} {mid} L {b} {mid} M {} {} L {b} {mid} L {} {}" fill="none" stroke="black" stroke-width="2"/>"#,
        b - 8,
        mid - 6,
        b - 8,
        mid + 6
    )
    .unwrap();
    Frame {
        left: MARGIN + SIDE + GAP,
    }
    .draw(&mut out, &e.range_pattern());
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
