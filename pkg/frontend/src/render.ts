// Client-side scene rendering: SVG markup from server-provided positions.
// No layout happens here; the viewer only draws what the service computed.

import type { SceneData, SceneNodeData } from './types.js';

function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function fmt(value: number): string {
  return value.toFixed(2);
}

function nodeMarkup(node: SceneNodeData): string {
  const left = node.x - node.width / 2;
  const top = node.y - node.height / 2;
  const group = node.is_group ? ' data-group="true"' : '';
  const main = node.is_main ? ' data-main="true"' : '';
  const cls = node.is_group ? 'node group' : 'node';
  const parts: string[] = [
    `<g class="${cls}" data-frame-id="${escapeXml(node.frame_id)}"${group}${main}>`,
  ];
  const dash = node.is_group ? ' stroke-dasharray="6 3"' : '';
  if (node.image) {
    // placeholder glyph sits underneath; it shows through if the image
    // fails to load
    parts.push(
      `<rect x="${fmt(left)}" y="${fmt(top)}" width="${fmt(node.width)}" ` +
      `height="${fmt(node.height)}" fill="#f1f5f9" stroke="#333"${dash}/>`,
      `<text class="glyph" x="${fmt(node.x)}" y="${fmt(node.y + 5)}" ` +
      `text-anchor="middle" font-size="18">?</text>`,
      `<image href="${escapeXml(node.image.path)}" x="${fmt(left)}" y="${fmt(top)}" ` +
      `width="${fmt(node.width)}" height="${fmt(node.height)}"/>`,
      `<text x="${fmt(node.x)}" y="${fmt(top + node.height + 12)}" ` +
      `text-anchor="middle" font-size="11">${escapeXml(node.label)}</text>`,
    );
  } else {
    const fill = node.kind === 'entity' ? '#dbeafe' : '#dcfce7';
    parts.push(
      `<rect x="${fmt(left)}" y="${fmt(top)}" width="${fmt(node.width)}" ` +
      `height="${fmt(node.height)}" rx="6" fill="${fill}" stroke="#333"${dash}/>`,
      `<text x="${fmt(node.x)}" y="${fmt(node.y + 4)}" text-anchor="middle" ` +
      `font-size="12">${escapeXml(node.label)}</text>`,
    );
  }
  if (node.is_group) {
    parts.push(
      `<text class="expand-badge" x="${fmt(left + node.width - 6)}" ` +
      `y="${fmt(top + 12)}" text-anchor="middle" font-size="12" ` +
      `fill="#1d4ed8">+</text>`,
    );
  }
  parts.push('</g>');
  return parts.join('');
}

/** Render a scene to SVG markup; empty scenes get an empty-state message. */
export function renderScene(scene: SceneData | null): string {
  if (!scene || scene.nodes.length === 0) {
    return '<p class="empty-state">Nothing to display at this level.</p>';
  }
  const pad = 24;
  const minX = Math.min(...scene.nodes.map((n) => n.x - n.width / 2)) - pad;
  const minY = Math.min(...scene.nodes.map((n) => n.y - n.height / 2)) - pad;
  const maxX = Math.max(...scene.nodes.map((n) => n.x + n.width / 2)) + pad;
  const maxY = Math.max(...scene.nodes.map((n) => n.y + n.height / 2)) + pad;
  const positions = new Map(scene.nodes.map((n) => [n.frame_id, n]));

  const edges = scene.edges.map((edge) => {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) return '';
    const mx = (a.x + b.x) / 2;
    const my = (a.y + b.y) / 2;
    return (
      `<line x1="${fmt(a.x)}" y1="${fmt(a.y)}" x2="${fmt(b.x)}" y2="${fmt(b.y)}"/>` +
      `<text x="${fmt(mx)}" y="${fmt(my)}" font-size="9" fill="#666" ` +
      `stroke="none" text-anchor="middle">${escapeXml(edge.label)}</text>`
    );
  });

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${fmt(minX)} ${fmt(minY)} ` +
    `${fmt(maxX - minX)} ${fmt(maxY - minY)}">`,
    `<g class="edges" stroke="#888" fill="none">${edges.join('')}</g>`,
    `<g class="nodes">${scene.nodes.map(nodeMarkup).join('')}</g>`,
    '</svg>',
  ].join('');
}

/** Breadcrumb bar markup: one chip per level of the navigation stack. */
export function renderBreadcrumbs(crumbs: { label: string }[]): string {
  return crumbs
    .map((c) => `<span class="crumb">${escapeXml(c.label)}</span>`)
    .join('<span class="crumb-sep">›</span>');
}
