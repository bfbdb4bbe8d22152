/**
 * PNG backend: rasterizes the shared plot model and encodes the pixels
 * directly (8-bit RGBA, filter 0, zlib from the runtime).  Minimal on
 * purpose: lines, markers and frames; text appears only in the SVG
 * output.  Same geometry as the SVG backend via the shared mapper.
 */

import { deflateSync } from "node:zlib";

import {
  HEIGHT, MARGIN, Panel, Shape, WIDTH, mapper, ticks,
} from "./plot.js";

export class Raster {
  data: Uint8Array;

  constructor(public width: number, public height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const k = (yi * this.width + xi) * 4;
    this.data[k] = rgb[0];
    this.data[k + 1] = rgb[1];
    this.data[k + 2] = rgb[2];
    this.data[k + 3] = 255;
  }

  dot(x: number, y: number, r: number, rgb: [number, number, number]): void {
    for (let dy = -r; dy <= r; dy++) {
      for (let dx = -r; dx <= r; dx++) {
        if (dx * dx + dy * dy <= r * r + 0.25) this.set(x + dx, y + dy, rgb);
      }
    }
  }

  rect(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number]): void {
    for (let y = Math.round(y0); y <= Math.round(y1); y++) {
      for (let x = Math.round(x0); x <= Math.round(x1); x++) this.set(x, y, rgb);
    }
  }

  /** Bresenham segment; dashed lines skip cells of the step counter. */
  line(x0: number, y0: number, x1: number, y1: number,
       rgb: [number, number, number], dashed = false): void {
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (!dashed || step % 11 < 7) this.set(xa, ya, rgb);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; xa += sx; }
      if (e2 <= dx) { err += dx; ya += sy; }
      step++;
    }
  }
}

function hexRgb(color: string): [number, number, number] {
  const v = parseInt(color.slice(1), 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

function drawShape(r: Raster, s: Shape, x: (v: number) => number, y: (v: number) => number): void {
  const rgb = hexRgb(s.color);
  if (s.kind === "polyline") {
    for (let i = 1; i < s.xs.length; i++) {
      r.line(x(s.xs[i - 1] as number), y(s.ys[i - 1] as number),
             x(s.xs[i] as number), y(s.ys[i] as number), rgb, s.dashed);
    }
    return;
  }
  const cx = x(s.x);
  const cy = y(s.y);
  if (s.kind === "glyphtext") {
    r.dot(cx, cy, 2, rgb);
    return;
  }
  if (s.glyph === "dot") {
    r.dot(cx, cy, 4, rgb);
  } else if (s.glyph === "square") {
    r.rect(cx - 3, cy - 3, cx + 3, cy + 3, rgb);
  } else {
    r.line(cx - 4, cy - 4, cx + 4, cy + 4, rgb);
    r.line(cx - 4, cy + 4, cx + 4, cy - 4, rgb);
  }
}

export function rasterize(allPanels: Panel[]): Raster {
  const r = new Raster(WIDTH, HEIGHT);
  const black: [number, number, number] = [0, 0, 0];
  for (const panel of allPanels) {
    const { plot, x0, width } = panel;
    const m = mapper(panel);
    const left = x0 + MARGIN.left;
    const right = x0 + width - MARGIN.right;
    const top = MARGIN.top;
    const bottom = HEIGHT - MARGIN.bottom;
    r.line(left, top, right, top, black);
    r.line(left, bottom, right, bottom, black);
    r.line(left, top, left, bottom, black);
    r.line(right, top, right, bottom, black);
    for (const t of ticks(plot.x)) {
      if (t < plot.x.min - 1e-9 || t > plot.x.max + 1e-9) continue;
      r.line(m.x(t), bottom, m.x(t), bottom + 5, black);
    }
    for (const t of ticks(plot.y)) {
      if (t < plot.y.min - 1e-9 || t > plot.y.max + 1e-9) continue;
      r.line(left - 5, m.y(t), left, m.y(t), black);
    }
    for (const s of plot.shapes) drawShape(r, s, m.x, m.y);
  }
  return r;
}

// --- PNG container ---------------------------------------------------------

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = (CRC_TABLE[(c ^ (buf[i] as number)) & 255] as number) ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "latin1");
  const body = Buffer.concat([head.subarray(4), payload]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head.subarray(0, 4), body, tail]);
}

export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const stride = width * 4;
  const filtered = Buffer.alloc((stride + 1) * height);
  for (let y = 0; y < height; y++) {
    filtered[y * (stride + 1)] = 0; // filter type 0
    filtered.set(data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const idat = deflateSync(filtered, { level: 9 });
  return Buffer.concat([
    Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}
