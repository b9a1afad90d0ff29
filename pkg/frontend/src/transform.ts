/** Linear screen/data coordinate transform with a flipped y axis. */

export interface Viewport {
	width: number;
	height: number;
	margin: number;
}

export class Transform {
	constructor(
		readonly scale: number,
		readonly offsetX: number,
		readonly offsetY: number,
		readonly height: number,
	) {}

	toScreen([x, y]: [number, number]): [number, number] {
		return [this.offsetX + x * this.scale, this.height - (this.offsetY + y * this.scale)];
	}

	toData([sx, sy]: [number, number]): [number, number] {
		return [(sx - this.offsetX) / this.scale, (this.height - sy - this.offsetY) / this.scale];
	}
}

/** Fit all points inside the viewport with a uniform scale, centered. */
export function fitTransform(points: [number, number][], vp: Viewport): Transform {
	let xMin = Infinity;
	let xMax = -Infinity;
	let yMin = Infinity;
	let yMax = -Infinity;
	for (const [x, y] of points) {
		xMin = Math.min(xMin, x);
		xMax = Math.max(xMax, x);
		yMin = Math.min(yMin, y);
		yMax = Math.max(yMax, y);
	}
	const spanX = Math.max(xMax - xMin, 1e-12);
	const spanY = Math.max(yMax - yMin, 1e-12);
	const innerW = vp.width - 2 * vp.margin;
	const innerH = vp.height - 2 * vp.margin;
	const scale = Math.min(innerW / spanX, innerH / spanY);
	const offsetX = vp.margin + (innerW - spanX * scale) / 2 - xMin * scale;
	const offsetY = vp.margin + (innerH - spanY * scale) / 2 - yMin * scale;
	return new Transform(scale, offsetX, offsetY, vp.height);
}
