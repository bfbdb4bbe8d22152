/** SVG backend: renders a panel list to deterministic markup. */

import {
  HEIGHT, MARGIN, Panel, Shape, WIDTH, fmtTick, mapper, ticks,
} from "./plot.js";

const FONT = 'font-family="DejaVu Sans Mono, monospace"';

function px(v: number): string {
  return (Math.round(v * 100) / 100).toFixed(2);
}

function shapeMarkup(s: Shape, x: (v: number) => number, y: (v: number) => number): string {
  if (s.kind === "polyline") {
    const pts = s.xs.map((vx, i) => `${px(x(vx))},${px(y(s.ys[i] as number))}`).join(" ");
    const dash = s.dashed ? ' stroke-dasharray="7,4"' : "";
    return `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`;
  }
  if (s.kind === "marker") {
    const cx = x(s.x);
    const cy = y(s.y);
    if (s.glyph === "dot") {
      return `<circle cx="${px(cx)}" cy="${px(cy)}" r="4" fill="${s.color}"/>`;
    }
    if (s.glyph === "square") {
      return `<rect x="${px(cx - 3.5)}" y="${px(cy - 3.5)}" width="7" height="7" fill="${s.color}"/>`;
    }
    return (
      `<path d="M ${px(cx - 4)} ${px(cy - 4)} L ${px(cx + 4)} ${px(cy + 4)} ` +
      `M ${px(cx - 4)} ${px(cy + 4)} L ${px(cx + 4)} ${px(cy - 4)}" ` +
      `stroke="${s.color}" stroke-width="1.8"/>`
    );
  }
  return (
    `<text x="${px(x(s.x))}" y="${px(y(s.y) + 4)}" ${FONT} font-size="13" ` +
    `text-anchor="middle" fill="${s.color}">${s.text}</text>`
  );
}

function panelMarkup(panel: Panel): string {
  const { plot, x0, width } = panel;
  const m = mapper(panel);
  const out: string[] = [];
  const left = x0 + MARGIN.left;
  const right = x0 + width - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;
  out.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${px(right - left)}" ` +
    `height="${px(bottom - top)}" fill="none" stroke="#000000" stroke-width="1"/>`,
  );
  for (const t of ticks(plot.x)) {
    if (t < plot.x.min - 1e-9 || t > plot.x.max + 1e-9) continue;
    const cx = m.x(t);
    out.push(`<line x1="${px(cx)}" y1="${px(bottom)}" x2="${px(cx)}" y2="${px(bottom + 5)}" stroke="#000000"/>`);
    out.push(
      `<text x="${px(cx)}" y="${px(bottom + 19)}" ${FONT} font-size="12" ` +
      `text-anchor="middle">${fmtTick(t)}</text>`,
    );
  }
  for (const t of ticks(plot.y)) {
    if (t < plot.y.min - 1e-9 || t > plot.y.max + 1e-9) continue;
    const cy = m.y(t);
    out.push(`<line x1="${px(left - 5)}" y1="${px(cy)}" x2="${px(left)}" y2="${px(cy)}" stroke="#000000"/>`);
    out.push(
      `<text x="${px(left - 8)}" y="${px(cy + 4)}" ${FONT} font-size="12" ` +
      `text-anchor="end">${fmtTick(t)}</text>`,
    );
  }
  out.push(
    `<text x="${px((left + right) / 2)}" y="${px(HEIGHT - 12)}" ${FONT} ` +
    `font-size="13" text-anchor="middle">${plot.x.label}</text>`,
  );
  out.push(
    `<text x="${px(x0 + 17)}" y="${px((top + bottom) / 2)}" ${FONT} font-size="13" ` +
    `text-anchor="middle" transform="rotate(-90 ${px(x0 + 17)} ${px((top + bottom) / 2)})">` +
    `${plot.y.label}</text>`,
  );
  out.push(
    `<text x="${px((left + right) / 2)}" y="${px(top - 12)}" ${FONT} ` +
    `font-size="14" text-anchor="middle">${plot.title}</text>`,
  );
  for (const s of plot.shapes) out.push(shapeMarkup(s, m.x, m.y));
  plot.legend.forEach((item, i) => {
    const ly = top + 16 + 16 * i;
    const dash = item.dashed ? ' stroke-dasharray="7,4"' : "";
    out.push(
      `<line x1="${px(right - 150)}" y1="${px(ly)}" x2="${px(right - 120)}" ` +
      `y2="${px(ly)}" stroke="${item.color}" stroke-width="1.5"${dash}/>`,
    );
    out.push(
      `<text x="${px(right - 114)}" y="${px(ly + 4)}" ${FONT} font-size="12">${item.label}</text>`,
    );
  });
  return out.join("\n");
}

export function renderSvg(allPanels: Panel[]): string {
  const body = allPanels.map(panelMarkup).join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n${body}\n</svg>\n`
  );
}
