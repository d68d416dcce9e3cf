void f(void)
{
    volatile int v = 0;
    int *p = 0;
    (void)v;
    (void)p;
}
