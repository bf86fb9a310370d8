/**
 * Debounced rechecking with a stale-response guard.
 *
 * Each edit restarts the debounce timer; only the response matching the
 * latest edit is delivered.  At most one request is in flight: an edit
 * arriving mid-flight is re-checked once the current request settles.
 */
export class CheckScheduler {
    constructor(check, callbacks, delayMs = 400) {
        this.check = check;
        this.callbacks = callbacks;
        this.delayMs = delayMs;
        this.editCounter = 0;
        this.inFlight = false;
        this.queued = null;
    }
    /** Schedule a check for the editor contents after the debounce delay. */
    noteEdit(text) {
        this.editCounter += 1;
        const edit = this.editCounter;
        if (this.timer !== undefined)
            clearTimeout(this.timer);
        this.timer = setTimeout(() => {
            this.timer = undefined;
            void this.fire(text, edit);
        }, this.delayMs);
    }
    /** Check immediately (used when loading an example). */
    checkNow(text) {
        this.editCounter += 1;
        if (this.timer !== undefined) {
            clearTimeout(this.timer);
            this.timer = undefined;
        }
        void this.fire(text, this.editCounter);
    }
    dispose() {
        if (this.timer !== undefined)
            clearTimeout(this.timer);
        this.editCounter += 1; // invalidate any in-flight response
    }
    async fire(text, edit) {
        if (this.inFlight) {
            this.queued = { text, edit };
            return;
        }
        this.inFlight = true;
        this.callbacks.onBusy?.(true);
        try {
            const report = await this.check(text);
            if (edit === this.editCounter)
                this.callbacks.onReport(report);
        }
        catch (error) {
            if (edit === this.editCounter)
                this.callbacks.onError(error);
        }
        finally {
            this.inFlight = false;
            this.callbacks.onBusy?.(false);
            if (this.queued !== null) {
                const next = this.queued;
                this.queued = null;
                void this.fire(next.text, next.edit);
            }
        }
    }
}
