/**
 * Minimal deterministic SVG assembly: fixed canvas, fixed precision, no
 * clock or randomness anywhere, so identical inputs give identical bytes.
 */

export const WIDTH = 800;
export const HEIGHT = 600;
export const MARGIN = { top: 40, right: 30, bottom: 55, left: 65 };

export function fmt(value: number): string {
  return value.toFixed(2);
}

export function escapeText(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  (value: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

export function element(
  tag: string,
  attrs: Record<string, string | number>,
  body = ""
): string {
  const rendered = Object.entries(attrs)
    .map(([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : value}"`)
    .join(" ");
  return body === ""
    ? `<${tag} ${rendered}/>`
    : `<${tag} ${rendered}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, anchor = "middle", size = 13): string {
  return element(
    "text",
    { x, y, "text-anchor": anchor, "font-size": size, "font-family": "sans-serif" },
    escapeText(content)
  );
}

export function document(body: string[], title: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    element("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    text(WIDTH / 2, 24, title, "middle", 16),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

export function axes(
  xLabel: string,
  yLabel: string,
  xTicks: { value: number; at: number }[],
  yTicks: { value: number; at: number }[]
): string[] {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(element("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#000000" }));
  parts.push(element("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#000000" }));
  for (const tick of xTicks) {
    parts.push(
      element("line", { x1: tick.at, y1: y0, x2: tick.at, y2: y0 + 5, stroke: "#000000" })
    );
    parts.push(text(tick.at, y0 + 20, tick.value.toFixed(2).replace(/\.?0+$/, "") || "0"));
  }
  for (const tick of yTicks) {
    parts.push(
      element("line", { x1: x0 - 5, y1: tick.at, x2: x0, y2: tick.at, stroke: "#000000" })
    );
    parts.push(text(x0 - 10, tick.at + 4, tick.value.toFixed(2).replace(/\.?0+$/, "") || "0", "end"));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 12, xLabel));
  parts.push(
    element(
      "text",
      {
        x: 18,
        y: (y0 + y1) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        "font-family": "sans-serif",
        transform: `rotate(-90 18 ${fmt((y0 + y1) / 2)})`,
      },
      escapeText(yLabel)
    )
  );
  return parts;
}
