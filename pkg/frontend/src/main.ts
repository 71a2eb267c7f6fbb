// DOM bootstrap: wires the controller to the page controls.

import { ApiClient } from './api.js';
import { renderBreadcrumbs, renderScene } from './render.js';
import { ViewerController } from './state.js';
import type { ViewState } from './state.js';

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

export function boot(baseUrl: string = ''): ViewerController {
  const canvas = byId<HTMLDivElement>('canvas');
  const crumbsEl = byId<HTMLDivElement>('breadcrumbs');
  const backButton = byId<HTMLButtonElement>('back');
  const openButton = byId<HTMLButtonElement>('open');
  const septInput = byId<HTMLTextAreaElement>('sept-input');
  const toast = byId<HTMLDivElement>('toast');
  const imageType = byId<HTMLSelectElement>('image-type');
  const sizeMode = byId<HTMLSelectElement>('size-mode');
  const ccFlag = byId<HTMLInputElement>('cc-flag');
  const gth = byId<HTMLInputElement>('gth');

  const controller = new ViewerController(
    new ApiClient(baseUrl),
    (state: ViewState) => {
      canvas.innerHTML = renderScene(state.scene);
      crumbsEl.innerHTML = renderBreadcrumbs(state.breadcrumbs);
      backButton.disabled = !controller.canGoBack || state.busy;
      toast.textContent = state.notice ?? '';
      toast.classList.toggle('visible', state.notice !== null);
    },
  );

  openButton.addEventListener('click', () => {
    controller.setPanel({
      imageType: imageType.value as 'all' | 'clipart' | 'lineart',
      sizeMode: sizeMode.value as 'all' | 'auto' | 'small',
      conceptCombination: ccFlag.checked,
      groupThreshold: Number(gth.value) || 6,
    });
    void controller.openDocument(septInput.value);
  });

  backButton.addEventListener('click', () => void controller.onBack());

  canvas.addEventListener('click', (event) => {
    const target = (event.target as Element).closest('[data-frame-id]');
    if (target instanceof SVGElement || target instanceof HTMLElement) {
      const frameId = target.getAttribute('data-frame-id');
      if (frameId) void controller.onExpand(frameId);
    }
  });

  return controller;
}

if (typeof document !== 'undefined' && document.getElementById('canvas')) {
  boot();
}
