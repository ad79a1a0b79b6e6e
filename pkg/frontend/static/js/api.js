/// Typed client for the studio HTTP API. The UI never computes pixels or
/// metrics itself; everything displayed comes back from these calls.
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
async function expect_json(response) {
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json();
            if (body.detail)
                detail = String(body.detail);
        }
        catch {
            // keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return (await response.json());
}
export class ApiClient {
    constructor(base = "") {
        this.base = base;
    }
    url(path) {
        return this.base + path;
    }
    async createSession(body) {
        const res = await fetch(this.url("/sessions"), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
        return (await expect_json(res)).session_id;
    }
    async population(sessionId, size = 192) {
        const res = await fetch(this.url(`/sessions/${sessionId}/population?size=${size}`));
        return expect_json(res);
    }
    async select(sessionId, slots) {
        const res = await fetch(this.url(`/sessions/${sessionId}/select`), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ slots }),
        });
        if (!res.ok)
            await expect_json(res);
    }
    async nextGeneration(sessionId) {
        const res = await fetch(this.url(`/sessions/${sessionId}/next`), { method: "POST" });
        return (await expect_json(res)).generation;
    }
    async publish(sessionId, slot, title, author) {
        const res = await fetch(this.url(`/sessions/${sessionId}/publish`), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ slot, title, author }),
        });
        return expect_json(res);
    }
    async genome(imageId) {
        return expect_json(await fetch(this.url(`/images/${imageId}/genome`)));
    }
    async sweep(imageId, connection, step = 0.1, size = 192) {
        const query = `connection=${connection}&step=${step}&size=${size}`;
        return expect_json(await fetch(this.url(`/images/${imageId}/sweep?${query}`)));
    }
    async putLabels(imageId, labels) {
        const res = await fetch(this.url(`/images/${imageId}/labels`), {
            method: "PUT",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ labels }),
        });
        return expect_json(res);
    }
    async getLabels(imageId) {
        return expect_json(await fetch(this.url(`/images/${imageId}/labels`)));
    }
}
